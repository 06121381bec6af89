import argparse
import math

from wermerset import utils
from wermerset.utils.analysis import complement_nesting_check
from wermerset.utils.construction import check_lev1


class Diagnostics(utils.Command):
    name = "diag"
    help = "Prints the eps_n^(1/2^n) ladder and runs the complement nesting check"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("--lev1", action="store_true", help="Only the eps_n^(1/2^n) ladder")
        parser.add_argument("--nesting", action="store_true", help="Only the complement nesting check")
        parser.add_argument("--file", default=None, help="The construction file")

    def run(self, args: argparse.Namespace) -> int:
        construction = self.load_construction(args)
        both = not (args.lev1 or args.nesting)
        ok = True

        if args.lev1 or both:
            sequence, decreasing = check_lev1(construction)
            for n, value in enumerate(sequence, start=1):
                print(f"eps_{n}^(1/2^{n}) = 10^{value / math.log(10):.6g}")
            if construction.depth >= 2:
                ok &= decreasing
                print(f"Verdict: {'decreasing' if decreasing else 'NOT decreasing'}")

        if args.nesting or both:
            for n in range(1, construction.depth):
                report = complement_nesting_check(construction, n)
                ok &= report.passed
                print(
                    f"Nesting {n} -> {n + 1}: {report.violations}/{report.checks} violations, "
                    f"worst margin {report.worst_margin:.6g}"
                )
        return 0 if ok else 2


def setup(runner: utils.Runner):
    x = Diagnostics(runner)
    runner.add_command(x)
