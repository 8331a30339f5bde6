package sig;

public class Sink {
    private int last;
    private int count;

    public void emit(int value) {
        last = value;
        count = count + 1;
    }

    public int last() {
        return last;
    }

    public void reset(Settings conf) {
        Settings fresh = conf.copy();
        last = 0;
    }
}
