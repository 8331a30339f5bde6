package sig;

public class Stage2 {
    private final Sink sink = new Sink();

    void open(Settings conf) {
        sink.emit(conf.gamma);
    }

    void step(Settings conf) {
        sink.emit(conf.gamma);
    }

    void flush(Settings conf) {
        sink.emit(conf.gamma);
    }
}
