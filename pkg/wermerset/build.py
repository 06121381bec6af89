import argparse

from wermerset import utils
from wermerset.utils.converters import stage_number


DEFAULT_STAGES = 3


class Build(utils.Command):
    name = "build"
    help = "Builds a construction up to a stage and writes it to a file"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument(
            "--stages",
            type=stage_number,
            default=None,
            help=f"How many stages to build (default {DEFAULT_STAGES})",
        )
        parser.add_argument("--file", default=None, help="Where to write the construction")

    def run(self, args: argparse.Namespace) -> int:
        """Starts a construction and advances it, saving what was built even when a
        later stage fails"""

        config = self.runner.grid_config(args)
        stages = args.stages or self.runner.config.get("stages", DEFAULT_STAGES)
        if stages > config.max_stage:
            config = config.with_overrides(max_stage=stages)
        mode = self.runner.mode(args)
        path = self.runner.construction_path(args)

        construction = None
        try:
            construction = utils.Construction.start(config, mode)
            while construction.depth < stages:
                construction = construction.advance()
        finally:
            if construction is not None:
                utils.serialization.save(construction, path)
                print(f"Wrote {construction.depth} stages to {path}")
            self.logger.info(self.runner.resource_line())
            print(self.runner.resource_line())

        for stage in construction.stages:
            print(repr(stage))
        for report in construction.reports:
            print(str(report))
        return 0


def setup(runner: utils.Runner):
    x = Build(runner)
    runner.add_command(x)
