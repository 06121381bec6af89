import argparse

import numpy as np

from wermerset import utils
from wermerset.utils.analysis import CLAMP, fiber_max_subharmonicity, potential_grid
from wermerset.utils.converters import complex_pair, stage_number, window_spec
from wermerset.utils.grid_export import ExportKind, GridExport, window, write_csv


class Potential(utils.Command):
    name = "potential"
    help = "Writes u_N on a z-window at a fixed w, and optionally checks the fibre maximum is subharmonic"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("--grid", type=window_spec, required=True, help="The z-window as re,im,half_width,count")
        parser.add_argument("--w-slice", type=complex_pair, required=True, help="The fixed w as re,im")
        parser.add_argument("--stage", type=stage_number, default=None, help="N (default the deepest stage)")
        parser.add_argument("--file", default=None, help="The construction file")
        parser.add_argument(
            "--subharmonic-radius",
            type=float,
            default=None,
            help="Check the sub-mean-value inequality on circles of this radius around the window points",
        )
        parser.add_argument("--tol", type=float, default=1e-3, help="Tolerance for the sub-mean-value check")

    def run(self, args: argparse.Namespace) -> int:
        construction = self.load_construction(args)
        N = self.stage_for(args, construction)
        if N < 2:
            raise utils.errors.CommandUsageError("--stage", str(N), "a stage of at least 2 (the potential starts at p_2)")
        center, half_width, count = args.grid
        rows, cols, points = window(center, half_width, count)
        z = points.reshape(-1)
        values, clamped = potential_grid(construction, z, np.full((z.size, 1), args.w_slice), N)
        export = GridExport(
            kind=ExportKind.POTENTIAL_SLICE,
            rows=rows,
            cols=cols,
            values=values.reshape(count, count),
            sentinel=CLAMP * (N - 1),
            fixed=f"w={args.w_slice} stage={N}",
        )
        path = self.runner.output_path(args, f"potential_stage{N}.csv")
        write_csv(export, path)
        print(f"Wrote u_{N} on a {count}x{count} window to {path} ({int(np.sum(clamped))} clamped terms)")

        if args.subharmonic_radius is None:
            return 0
        report = fiber_max_subharmonicity(construction, z, args.subharmonic_radius, N, tol=args.tol)
        print(
            f"Sub-mean-value check: {report.violations}/{report.checks} violations, "
            f"worst excess {report.worst_excess:.6g} at z={report.worst_center}"
        )
        return 0 if report.passed else 2


def setup(runner: utils.Runner):
    x = Potential(runner)
    runner.add_command(x)
