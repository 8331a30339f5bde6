package app.view;

public class Graphics {
    private int color;
    private int x;
    private int y;

    public void fill(int color) {
        this.color = color;
    }

    public void stroke(int width) {
        this.color = width;
    }

    public void moveTo(int x, int y) {
        this.x = x;
        this.y = y;
    }

    public void lineTo(int x, int y) {
        moveTo(x, y);
    }

    public void pause(int millis) {
        this.color = millis;
    }
}
