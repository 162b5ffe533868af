"""Dependency-free SVG rendering of 2-D decision boundaries."""

_WIDTH = 520
_HEIGHT = 520
_REGION_POS = "#d8f0d8"
_REGION_NEG = "#f9e0ec"
_SRC_POS = "#2e8b57"
_SRC_NEG = "#e75480"
_TGT = "#808080"


def _scaler(xs, ys, width, height):
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    sx = width / (x1 - x0) if x1 > x0 else 1.0
    sy = height / (y1 - y0) if y1 > y0 else 1.0

    def to_px(x, y):
        # flip y: SVG origin is the top-left corner
        return (x - x0) * sx, height - (y - y0) * sy

    return to_px


def write_boundary_svg(path, grid_x, grid_y, predictions, source, target):
    """Render class regions on a grid plus source/target scatter points.

    ``predictions`` is a (len(grid_y), len(grid_x)) array of +-1 values;
    horizontal runs of equal prediction are merged into single rects to
    keep the file small.
    """
    nx, ny = len(grid_x), len(grid_y)
    to_px = _scaler(
        list(grid_x) + list(source.X[:, 0]) + list(target.X[:, 0]),
        list(grid_y) + list(source.X[:, 1]) + list(target.X[:, 1]),
        _WIDTH,
        _HEIGHT,
    )
    cell_w = _WIDTH / nx
    cell_h = _HEIGHT / ny
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_WIDTH}" height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">'
    ]
    for iy in range(ny):
        px, py = to_px(grid_x[0], grid_y[iy])
        ix = 0
        while ix < nx:
            run = ix
            label = predictions[iy][ix]
            while run < nx and predictions[iy][run] == label:
                run += 1
            color = _REGION_POS if label > 0 else _REGION_NEG
            x_left, _ = to_px(grid_x[ix], grid_y[iy])
            parts.append(
                f'<rect x="{x_left - cell_w / 2:.2f}" y="{py - cell_h / 2:.2f}" '
                f'width="{(run - ix) * cell_w:.2f}" height="{cell_h:.2f}" fill="{color}"/>'
            )
            ix = run
    for x, y in target.X:
        px, py = to_px(x, y)
        parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" fill="{_TGT}"/>')
    for (x, y), label in zip(source.X, source.y):
        px, py = to_px(x, y)
        color = _SRC_POS if label > 0 else _SRC_NEG
        parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" fill="{color}"/>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
