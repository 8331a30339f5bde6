"""Regenerate the reduction fixture: a UI toolkit with a large constants class
and an application whose painters pass ints to a drawing surface.

Run from this directory: python3 make_fixture.py
"""
from itertools import product
from pathlib import Path

WIDGETS = ["TAB", "MENU", "BUTTON", "PANEL", "LABEL", "SCROLL", "DIALOG", "STATUS"]
PARTS = ["BORDER", "TITLE", "ICON", "HEADER", "FOOTER", "CORNER", "SHADOW", "GRIP"]
ATTRS = ["BACKGROUND", "FOREGROUND", "WIDTH", "HEIGHT", "INSET", "OFFSET", "RADIUS", "ALPHA", "DELAY"]

# painter name -> (gold constant used by its last method, method name)
PAINTERS = [
    ("Tab", "TAB_BORDER_BACKGROUND", "paintBackground"),
    ("Menu", "MENU_ICON_WIDTH", "iconWidth"),
    ("Button", "BUTTON_SHADOW_RADIUS", "roundShadow"),
    ("Panel", "PANEL_HEADER_HEIGHT", "headerHeight"),
    ("Label", "LABEL_TITLE_FOREGROUND", "titleForeground"),
    ("Scroll", "SCROLL_GRIP_INSET", "gripInset"),
    ("Dialog", "DIALOG_CORNER_ALPHA", "fadeCorner"),
    ("Status", "STATUS_FOOTER_DELAY", "blink"),
]


def constants():
    lines = ["package lib.ui;", "", "/** Look-and-feel constants. */", "public final class Constants {"]
    for i, (w, p, a) in enumerate(product(WIDGETS, PARTS, ATTRS)):
        lines.append(f"    public static final int {w}_{p}_{a} = {i};")
    lines += ["", "    private Constants() {", "    }", "}", ""]
    return "\n".join(lines)


GRAPHICS = """package app.view;

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
"""


def painter(name, gold, method):
    return f"""package app.view;

import lib.ui.Constants;

public class {name}Painter {{
    private final Graphics g;
    private int left;
    private int top;
    private int size;

    public {name}Painter(Graphics g, int size) {{
        this.g = g;
        this.size = size;
    }}

    void outline(int width, int height) {{
        g.moveTo(left, top);
        g.lineTo(width, top);
        g.lineTo(width, height);
        g.stroke(size);
    }}

    void place(int x, int y) {{
        left = x;
        top = y;
        g.moveTo(x, y);
    }}

    void color(int rgb) {{
        int shade = rgb;
        g.fill(shade);
    }}

    void {method}() {{
        g.fill(Constants.{gold});
    }}
}}
"""


def main():
    here = Path(__file__).parent
    lib = here / "uikit" / "lib" / "ui"
    app = here / "app" / "src" / "app" / "view"
    lib.mkdir(parents=True, exist_ok=True)
    app.mkdir(parents=True, exist_ok=True)
    (lib / "Constants.java").write_text(constants())
    (app / "Graphics.java").write_text(GRAPHICS)
    for name, gold, method in PAINTERS:
        (app / f"{name}Painter.java").write_text(painter(name, gold, method))
    (here / "manifest.txt").write_text("uikit\napp\n")


if __name__ == "__main__":
    main()
