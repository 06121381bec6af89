import argparse

from wermerset import utils
from wermerset.utils.construction import verify_stage
from wermerset.utils.converters import stage_number
from wermerset.utils.errors import PredicateFailure


class Verify(utils.Command):
    name = "verify"
    help = "Re-runs every check of a saved construction on the verification grid"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("--file", default=None, help="The construction file")
        parser.add_argument("--stage", type=stage_number, default=None, help="Only check this stage")

    def run(self, args: argparse.Namespace) -> int:
        construction = self.load_construction(args)
        stages = [self.stage_for(args, construction)] if args.stage else range(1, construction.depth + 1)
        failed = []
        for n in stages:
            stored = {report.predicate: report for report in construction.reports_for(n)}
            for report in verify_stage(construction, n):
                print(str(report))
                before = stored.get(report.predicate)
                if before is not None and before.passed != report.passed:
                    self.logger.warning(f"{report.predicate.value} at stage {n} was stored as {'pass' if before.passed else 'fail'}")
                if not report.passed:
                    failed.append(report)
        if failed:
            raise PredicateFailure(failed[0].stage, failed)
        return 0


def setup(runner: utils.Runner):
    x = Verify(runner)
    runner.add_command(x)
