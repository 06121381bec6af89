import argparse
import sys
import traceback
import typing

from wermerset import utils
from wermerset.utils import errors


class ErrorHandler(utils.Command):
    def say(self, text: str):
        print(text, file=sys.stderr)

    @utils.Command.listener()
    def on_command_error(self, args: typing.Optional[argparse.Namespace], error: Exception) -> int:
        """Global error handler for every command: prints a message and picks the exit code"""

        # Bad command line
        if isinstance(error, errors.CommandUsageError):
            self.say(str(error))
            usage = error.usage or (self.runner.parser.format_usage() if self.runner.parser else None)
            if usage:
                self.say(usage.strip())
            return 1

        # A stage that was built or re-checked and failed
        elif isinstance(error, errors.PredicateFailure):
            self.say(str(error))
            for report in error.reports:
                self.say(f"  {report}")
            return 2

        # Config values
        elif isinstance(error, errors.ConfigError):
            self.say(str(error))
            return 1

        # Construction files
        elif isinstance(error, (errors.SchemaMismatch, errors.InvariantViolation)):
            self.say(f"The construction file can't be used - {error}")
            return 1
        elif isinstance(error, FileNotFoundError):
            self.say(f"There's no file at `{error.filename}` - run `build` first or pass --file.")
            return 1

        # Selectors and numerical kernels
        elif isinstance(error, errors.SearchExhausted):
            self.say(f"{error} Double precision runs out around this stage; a smaller --stages will work.")
            return 1
        elif isinstance(error, errors.WermerSetError):
            self.say(str(error))
            return 1

        # Anything else
        self.logger.critical(f"Unexpected error running {getattr(args, 'command', None)}")
        self.say("".join(traceback.format_exception(type(error), error, error.__traceback__)))
        return 1


def setup(runner: utils.Runner):
    x = ErrorHandler(runner)
    runner.add_command(x)
