import argparse
import logging
import typing

from wermerset.utils import serialization
from wermerset.utils.errors import CommandUsageError
from wermerset.utils.runner import Runner


class Command(object):
    """A thin base for command modules that hands out a child logger of the runner

    Subclasses set name (the subcommand, or None for modules that only listen) and
    help, add their flags in add_arguments, and do their work in run, which gives
    back an exit code.
    """

    name: typing.Optional[str] = None
    help: str = ""

    def __init__(self, runner: Runner, logger_name: str = None):
        self.runner = runner
        runner_logger = getattr(runner, "logger", logging.getLogger("wermerset"))
        if logger_name:
            self.logger = runner_logger.getChild(logger_name)
        else:
            self.logger = runner_logger.getChild(self.get_logger_name())

    @staticmethod
    def listener():
        """Marks a method as an event listener the runner should call"""

        def decorator(func):
            func.__command_listener__ = func.__name__
            return func

        return decorator

    def get_listeners(self) -> typing.List[typing.Tuple[str, typing.Callable]]:
        listeners = []
        for attribute in dir(self.__class__):
            func = getattr(self.__class__, attribute)
            event = getattr(func, "__command_listener__", None)
            if event is not None:
                listeners.append((event, getattr(self, attribute)))
        return listeners

    def get_logger_name(self, *prefixes, sep: str = ".") -> str:
        """Gets the name of the class with any given prefixes, with sep as a seperator"""

        return sep.join(["command"] + list(prefixes) + [self.__class__.__name__])

    def load_construction(self, args: argparse.Namespace):
        """The construction named by --file, or the one in the output directory"""

        return serialization.load(self.runner.construction_path(args))

    def stage_for(self, args: argparse.Namespace, construction, attribute: str = "stage") -> int:
        """The --stage flag, defaulting to the deepest built stage"""

        stage = getattr(args, attribute, None)
        if stage is None:
            return construction.depth
        if stage > construction.depth:
            raise CommandUsageError(f"--{attribute}", str(stage), f"a built stage (1 to {construction.depth})")
        return stage

    def add_arguments(self, parser: argparse.ArgumentParser):
        pass

    def run(self, args: argparse.Namespace) -> int:
        raise NotImplementedError()
