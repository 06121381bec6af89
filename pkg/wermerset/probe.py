import argparse
import math

from wermerset import utils
from wermerset.utils.analysis import (
    CircleProbe,
    coherence_check,
    cut_crossings,
    jump_check,
    separation_check,
    shadow_check,
)
from wermerset.utils.converters import circle_triple, stage_number
from wermerset.utils.errors import ProbeInvalid


SEPARATION_BOUND = 1.5
SHADOW_ROOT_BOUND = 1 / 9
SHADOW_SUBLEVEL_BOUND = 1 / 4
TOL = 1e-8


class Probe(utils.Command):
    name = "probe"
    help = "Runs the separation, shadow, jump and coherence checks on a circle"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("--circle", type=circle_triple, required=True, help="The circle as re,im,r")
        parser.add_argument("--k", type=stage_number, required=True, help="The reference stage k")
        parser.add_argument("--stage", type=stage_number, default=None, help="N for the shadow and coherence checks")
        parser.add_argument("--samples", type=int, default=None, help="Points on the circle")
        parser.add_argument("--file", default=None, help="The construction file")

    def run(self, args: argparse.Namespace) -> int:
        construction = self.load_construction(args)
        k = self.stage_for(args, construction, "k")
        N = max(k, self.stage_for(args, construction))
        center, radius = args.circle
        probe = CircleProbe(center, radius, k, args.samples or construction.config.probe_samples)
        ok = True

        separation = separation_check(construction, probe)
        ok &= separation > SEPARATION_BOUND
        print(f"Separation ratio at stage {k}: {round(separation, 6)} (needs > {SEPARATION_BOUND})")

        z0 = complex(probe.points()[0])
        shadow = shadow_check(construction, z0, N, k)
        sublevel = shadow_check(construction, z0, N, k, sublevel=True)
        ok &= shadow <= SHADOW_ROOT_BOUND + TOL and sublevel < SHADOW_SUBLEVEL_BOUND
        print(f"Shadow ratio at z={z0:.6g}, N={N}: roots {shadow:.6g} (needs <= 1/9), sublevel {sublevel:.6g} (needs < 1/4)")

        encloses = abs(construction.table[k] - center) < radius
        for z1 in cut_crossings(construction, probe):
            try:
                jump, reference = jump_check(construction, probe, z1)
            except ProbeInvalid as e:
                self.logger.warning(f"Skipping the crossing at {z1} - {e}")
                continue
            if encloses:
                ok &= jump >= reference - TOL
            print(f"Jump at z1={z1:.6g}: {jump:.6g} against 2 c_k |Z beta_k| = {reference:.6g}")

        if N > k:
            coherence = coherence_check(construction, probe, N)
            ok &= coherence.passed
            print(f"Coherence of stage {N} with stage {k}: ratio {coherence.max_ratio:.6g} (needs < 1/3), {coherence.switches} switches")

        if not math.isfinite(separation):
            self.logger.warning("The separation ratio isn't finite - the circle passes through a zero of the term")
        return 0 if ok else 2


def setup(runner: utils.Runner):
    x = Probe(runner)
    runner.add_command(x)
