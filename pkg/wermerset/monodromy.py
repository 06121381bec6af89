import argparse

from wermerset import utils
from wermerset.utils.branches import (
    SignVector,
    branch_eval,
    continue_along_loop,
    identify_branch,
    monodromy,
    track_branch,
)
from wermerset.utils.converters import circle_triple, stage_number
from wermerset.utils.errors import CommandUsageError


ROOT_TRACKING_STAGES = 3


def sign_vector(text: str) -> SignVector:
    if not text or any(character not in "+-" for character in text):
        raise CommandUsageError("--branch", text, "a string of + and - signs")
    return SignVector(1 if character == "+" else -1 for character in text)


class Monodromy(utils.Command):
    name = "monodromy"
    help = "Continues the branches of g_n once around a loop and names the branch each comes back on"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("--loop", type=circle_triple, required=True, help="The loop as re,im,r")
        parser.add_argument("--stage", type=stage_number, default=None, help="n (default the deepest stage)")
        parser.add_argument("--branch", type=sign_vector, default=None, help="One sign vector, e.g. --branch=+-+ (default all)")
        parser.add_argument("--file", default=None, help="The construction file")

    def run(self, args: argparse.Namespace) -> int:
        """Compares the sign flips predicted by the enclosed branch points with branch
        tracking, and with root tracking on p_n for the shallow stages"""

        construction = self.load_construction(args)
        n = self.stage_for(args, construction)
        fs = construction.function_set(n)
        center, radius = args.loop
        if args.branch is not None and len(args.branch) != n:
            raise CommandUsageError("--branch", repr(args.branch), f"{n} signs")
        branches = [args.branch] if args.branch is not None else SignVector.all(n)
        p = construction.stages[n - 1].p
        z_start = center + radius

        agree = True
        for s in branches:
            predicted = monodromy(center, radius, s, fs, construction.table)
            tracked = track_branch(fs, center, radius, s)
            line = f"{s!r} -> {predicted!r} (tracked {tracked!r}"
            agree &= tracked == predicted
            if n <= ROOT_TRACKING_STAGES:
                w_end = continue_along_loop(p, center, radius, complex(branch_eval(s, z_start, fs)))
                followed, distance = identify_branch(w_end, z_start, fs)
                line += f", root {followed!r} at distance {distance:.3g}"
                agree &= followed == predicted
            print(line + ")")
        return 0 if agree else 2


def setup(runner: utils.Runner):
    x = Monodromy(runner)
    runner.add_command(x)
