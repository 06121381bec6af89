import argparse

import numpy as np

from wermerset import utils
from wermerset.utils.analysis import fiber
from wermerset.utils.converters import complex_pair, stage_number
from wermerset.utils.grid_export import write_table


class Fiber(utils.Command):
    name = "fiber"
    help = "Prints the roots of p_N above a point and writes them as CSV"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("--z", type=complex_pair, required=True, help="The base point as re,im")
        parser.add_argument("--stage", type=stage_number, default=None, help="N (default the deepest stage)")
        parser.add_argument("--file", default=None, help="The construction file")
        parser.add_argument("--samples", action="store_true", help="Also write the sublevel samples")

    def run(self, args: argparse.Namespace) -> int:
        construction = self.load_construction(args)
        N = self.stage_for(args, construction)
        report = fiber(construction, args.z, N)

        print(f"Fibre of stage {N} above z = {report.z0}:")
        for root, multiplicity in zip(report.roots.roots, report.roots.multiplicities):
            print(f"  w = {root.real:+.12g} {root.imag:+.12g}i  (multiplicity {multiplicity})")
        print(f"Smallest gap between roots: {report.min_pair_gap:.6g}")
        print(f"Largest distance from a sublevel sample to a root: {report.hausdorff_root_to_sublevel:.6g}")

        rows = np.column_stack([report.roots.roots.real, report.roots.roots.imag, report.roots.multiplicities])
        write_table(
            self.runner.output_path(args, f"fiber_stage{N}.csv"),
            ["w_real", "w_imag", "multiplicity"],
            rows,
            comment=f"stage {N} z {report.z0.real:.17g} {report.z0.imag:.17g}",
        )
        if args.samples and report.sublevel_samples.size:
            samples = report.sublevel_samples
            write_table(
                self.runner.output_path(args, f"fiber_stage{N}_sublevel.csv"),
                ["w_real", "w_imag"],
                np.column_stack([samples.real, samples.imag]),
                comment=f"stage {N} z {report.z0.real:.17g} {report.z0.imag:.17g}",
            )
        return 0


def setup(runner: utils.Runner):
    x = Fiber(runner)
    runner.add_command(x)
