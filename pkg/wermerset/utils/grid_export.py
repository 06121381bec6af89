import dataclasses
import enum
import io
import logging
import typing

import numpy as np


logger = logging.getLogger("wermerset.export")


class ExportKind(enum.Enum):
    FIBER_SLICE = "fiber_slice"  # sublevel membership on a w-window above one z
    POTENTIAL_SLICE = "potential_slice"  # u_N on a z-window at a fixed w
    MARGIN_MAP = "margin_map"  # a pointwise margin on a z-window


@dataclasses.dataclass(frozen=True)
class Axis(object):
    """count equally spaced values from start to stop, both included"""

    name: str
    start: float
    stop: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def header(self) -> str:
        return f"{self.name} {self.start:.17g} {self.stop:.17g} {self.count}"

    @classmethod
    def parse(cls, text: str) -> "Axis":
        name, start, stop, count = text.split()
        return cls(name, float(start), float(stop), int(count))


def window(center: complex, half_width: float, count: int) -> typing.Tuple[Axis, Axis, np.ndarray]:
    """Row (imaginary) and column (real) axes of a square window and its points,
    shape (count, count), rows running upwards"""

    center = complex(center)
    rows = Axis("imag", center.imag - half_width, center.imag + half_width, count)
    cols = Axis("real", center.real - half_width, center.real + half_width, count)
    points = cols.values()[None, :] + 1j * rows.values()[:, None]
    return rows, cols, points


@dataclasses.dataclass(frozen=True)
class GridExport(object):
    """A row-major value table over two declared axes

    Params:
        kind: ExportKind
        rows: Axis
        cols: Axis
        values: 2D array of float
            Shape (rows.count, cols.count)
        sentinel: float = None
            The one non-finite-safe value allowed in the table (the potential clamp)
        fixed: str = ""
            What is held fixed, e.g. "z=0.5+0j stage=3"
    """

    kind: ExportKind
    rows: Axis
    cols: Axis
    values: np.ndarray
    sentinel: typing.Optional[float] = None
    fixed: str = ""

    def __post_init__(self):
        shape = (self.rows.count, self.cols.count)
        if np.shape(self.values) != shape:
            raise ValueError(f"Values have shape {np.shape(self.values)}, the axes declare {shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Grid exports only hold finite values")

    def header_lines(self) -> typing.List[str]:
        lines = [
            f"kind {self.kind.value}",
            f"rows {self.rows.header()}",
            f"cols {self.cols.header()}",
        ]
        if self.sentinel is not None:
            lines.append(f"sentinel {self.sentinel:.17g}")
        if self.fixed:
            lines.append(f"fixed {self.fixed}")
        return lines


def write_csv(export: GridExport, path: str):
    """Writes the table with its axes as '#' header lines"""

    buffer = io.StringIO()
    np.savetxt(buffer, export.values, fmt="%.17g", delimiter=",", header="\n".join(export.header_lines()))
    with open(path, "w") as a:
        a.write(buffer.getvalue())
    logger.info(f"Wrote {export.kind.value} {export.values.shape} to {path}")


def read_csv(path: str) -> GridExport:
    header = {}
    with open(path) as a:
        for line in a:
            if not line.startswith("#"):
                break
            key, _, rest = line[1:].strip().partition(" ")
            header[key] = rest
    values = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    return GridExport(
        kind=ExportKind(header["kind"]),
        rows=Axis.parse(header["rows"]),
        cols=Axis.parse(header["cols"]),
        values=values,
        sentinel=float(header["sentinel"]) if "sentinel" in header else None,
        fixed=header.get("fixed", ""),
    )


def write_table(path: str, columns: typing.Sequence[str], rows: np.ndarray, comment: str = ""):
    """A plain CSV with a '#' comment and a named column header"""

    header = "\n".join(filter(None, [comment, ",".join(columns)]))
    buffer = io.StringIO()
    np.savetxt(buffer, np.atleast_2d(rows), fmt="%.17g", delimiter=",", header=header)
    with open(path, "w") as a:
        a.write(buffer.getvalue())
    logger.info(f"Wrote {len(rows)} rows to {path}")


def to_graymap(values: np.ndarray, low: float = None, high: float = None) -> np.ndarray:
    """Scales values to 0 .. 255, low and high defaulting to the table's range"""

    values = np.asarray(values, dtype=float)
    low = float(values.min()) if low is None else low
    high = float(values.max()) if high is None else high
    if high <= low:
        return np.zeros(values.shape, dtype=np.uint8)
    scaled = np.clip((values - low) / (high - low), 0.0, 1.0)
    return np.round(255 * scaled).astype(np.uint8)


def write_pgm(export: GridExport, path: str, low: float = None, high: float = None):
    """Writes a binary portable graymap, the top row of the image being the last row of
    the table so the imaginary axis points up"""

    pixels = to_graymap(export.values, low, high)[::-1]
    height, width = pixels.shape
    comments = "".join(f"# {line}\n" for line in export.header_lines())
    with open(path, "wb") as a:
        a.write(f"P5\n{comments}{width} {height}\n255\n".encode("ascii"))
        a.write(pixels.tobytes())
    logger.info(f"Wrote a {width}x{height} graymap to {path}")


def read_pgm(path: str) -> np.ndarray:
    """The pixels of a binary graymap written by write_pgm, top row first"""

    with open(path, "rb") as a:
        data = a.read()
    fields = []
    position = 0
    while len(fields) < 4:
        end = data.index(b"\n", position)
        line = data[position:end]
        position = end + 1
        if not line.startswith(b"#"):
            fields.extend(line.split())
    _, width, height, _ = fields
    return np.frombuffer(data[position:], dtype=np.uint8).reshape(int(height), int(width))
