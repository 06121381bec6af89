import argparse

import numpy as np

from wermerset import utils
from wermerset.utils.analysis import circle_sampler, disk_sampler, extract_E, segment_sampler, stage_frame
from wermerset.utils.converters import circle_triple, segment_ends, stage_number, window_spec
from wermerset.utils.errors import CommandUsageError
from wermerset.utils.grid_export import ExportKind, GridExport, window, write_csv, write_pgm, write_table


MARGIN_CAP = 1e6
SEPARATION_BOUND = 1.5


def separation_margin(construction, z: np.ndarray, k: int) -> np.ndarray:
    """min |h_s - h_t| / (c_k |Z_(k-1) beta_k|) - 3/2 at each z, capped at MARGIN_CAP"""

    frame = stage_frame(construction, z, k)
    scale = construction.stages[k - 1].c * frame.term_modulus(k)
    with np.errstate(divide="ignore", invalid="ignore"):
        margin = frame.min_gap(k) / scale - SEPARATION_BOUND
    return np.where(np.isfinite(margin), np.minimum(margin, MARGIN_CAP), MARGIN_CAP)


class Export(utils.Command):
    name = "export"
    help = "Writes a separation margin map or a point cloud of E over a sampled set"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("kind", choices=["margin-map", "cloud"], help="What to write")
        parser.add_argument("--file", default=None, help="The construction file")
        parser.add_argument("--stage", type=stage_number, default=None, help="N (default the deepest stage)")
        parser.add_argument("--grid", type=window_spec, default=None, help="margin-map: the z-window as re,im,half_width,count")
        parser.add_argument("--segment", type=segment_ends, default=None, help="cloud: S is the segment re0,im0,re1,im1")
        parser.add_argument("--disk", type=circle_triple, default=None, help="cloud: S is the disk re,im,r (random points)")
        parser.add_argument("--circle", type=circle_triple, default=None, help="cloud: S is the circle re,im,r")
        parser.add_argument("--count", type=int, default=64, help="cloud: how many points of S")
        parser.add_argument("--sublevel", action="store_true", help="cloud: sublevel samples instead of roots")

    def run(self, args: argparse.Namespace) -> int:
        construction = self.load_construction(args)
        N = self.stage_for(args, construction)
        if args.kind == "margin-map":
            return self.margin_map(args, construction, N)
        return self.cloud(args, construction, N)

    def margin_map(self, args: argparse.Namespace, construction, N: int) -> int:
        center, half_width, count = args.grid or (0j, construction.disk_radius(N + 1), 128)
        rows, cols, points = window(center, half_width, count)
        margin = separation_margin(construction, points.reshape(-1), N)
        export = GridExport(
            kind=ExportKind.MARGIN_MAP,
            rows=rows,
            cols=cols,
            values=margin.reshape(count, count),
            sentinel=MARGIN_CAP,
            fixed=f"separation stage={N}",
        )
        path = self.runner.output_path(args, f"margin_map_stage{N}.csv")
        write_csv(export, path)
        write_pgm(export, path[:-4] + ".pgm", low=0.0, high=float(np.quantile(margin, 0.95)))
        print(f"Wrote the stage-{N} separation margin map to {path} (smallest margin {margin.min():.6g})")
        return 0

    def cloud(self, args: argparse.Namespace, construction, N: int) -> int:
        chosen = [flag for flag in ("segment", "disk", "circle") if getattr(args, flag) is not None]
        if len(chosen) != 1:
            raise CommandUsageError("the sampled set", ", ".join(chosen) or "nothing", "exactly one of --segment, --disk, --circle")
        if args.segment is not None:
            sampler = segment_sampler(*args.segment, args.count)
        elif args.disk is not None:
            sampler = disk_sampler(*args.disk, args.count, seed=construction.config.seed)
        else:
            sampler = circle_sampler(*args.circle, args.count)
        cloud = extract_E(construction, sampler, N, per_point_roots=not args.sublevel)
        path = self.runner.output_path(args, f"cloud_stage{N}.csv")
        write_table(
            path,
            ["z_real", "z_imag", "w_real", "w_imag", "sample"],
            np.column_stack([cloud.z.real, cloud.z.imag, cloud.w.real, cloud.w.imag, cloud.source]),
            comment=f"stage {N} {'sublevel samples' if args.sublevel else 'roots'}",
        )
        print(f"Wrote {len(cloud)} points over {cloud.samples.size} samples to {path}")
        return 0


def setup(runner: utils.Runner):
    x = Export(runner)
    runner.add_command(x)
