import argparse

import numpy as np

from wermerset import utils
from wermerset.utils.analysis import membership_index, stage_frame
from wermerset.utils.converters import complex_pair, stage_number, window_spec
from wermerset.utils.grid_export import ExportKind, GridExport, window, write_csv, write_pgm


def membership_depth(construction, z0: complex, w: np.ndarray, N: int) -> np.ndarray:
    """How many of the stages from the membership index of z0 up to N have w in their
    sublevel set; the full count marks points of the stage-N approximation"""

    frame = stage_frame(construction, complex(z0), N)
    n0 = membership_index(construction, complex(z0))
    first = N if n0 is None or n0 > N else n0
    w = np.asarray(w, dtype=complex).reshape(1, -1)
    depth = np.zeros(w.shape[1], dtype=int)
    for j in range(first, N + 1):
        depth += (frame.log_modulus_at(j, w)[0] <= construction.stages[j - 1].log_eps).astype(int)
    return depth


class Slice(utils.Command):
    name = "slice"
    help = "Writes sublevel membership on a w-window above a fixed z"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("--z", type=complex_pair, required=True, help="The base point as re,im")
        parser.add_argument(
            "--window",
            type=window_spec,
            default=None,
            help="The w-window as re,im,half_width,count (default centred at 0 with half width rho_N)",
        )
        parser.add_argument("--stage", type=stage_number, default=None, help="N (default the deepest stage)")
        parser.add_argument("--file", default=None, help="The construction file")
        parser.add_argument("--fiber-raster", action="store_true", help="Also write a portable graymap")

    def run(self, args: argparse.Namespace) -> int:
        construction = self.load_construction(args)
        N = self.stage_for(args, construction)
        if args.window is None:
            center, half_width, count = 0j, construction.stages[N - 1].rho, 256
        else:
            center, half_width, count = args.window
        rows, cols, points = window(center, half_width, count)
        depth = membership_depth(construction, args.z, points.reshape(-1), N)
        export = GridExport(
            kind=ExportKind.FIBER_SLICE,
            rows=rows,
            cols=cols,
            values=depth.reshape(count, count).astype(float),
            fixed=f"z={args.z} stage={N}",
        )
        path = self.runner.output_path(args, f"fiber_slice_stage{N}.csv")
        write_csv(export, path)
        print(f"Wrote sublevel membership above z={args.z} to {path}")
        if args.fiber_raster:
            raster = self.runner.output_path(args, f"fiber_slice_stage{N}.pgm")
            write_pgm(export, raster, low=0.0)
            print(f"Wrote the raster to {raster}")
        return 0


def setup(runner: utils.Runner):
    x = Slice(runner)
    runner.add_command(x)
