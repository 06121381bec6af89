import argparse
import collections
import copy
import glob
import importlib
import logging
import os
import typing
from datetime import datetime as dt

import psutil
import toml

from wermerset.utils.construction import MODES, Construction, GridConfig
from wermerset.utils.errors import CommandUsageError, ConfigError


class UsageParser(argparse.ArgumentParser):
    """An ArgumentParser that raises CommandUsageError instead of exiting"""

    def error(self, message: str):
        raise CommandUsageError(self.prog, message, "arguments matching the usage", usage=self.format_usage())


class Runner(object):
    """Holds the configuration and the loaded command modules, and runs one command

    Settings resolve as built-in defaults, then the config file (--config or the
    WERMERSET_CONFIG environment variable), then the command line flags.
    """

    DEFAULT_CONFIG = {
        "mode": "modified",
        "seed": 0,
        "out": ".",
        "grid": {},
        "logging": {},
    }
    CONSTRUCTION_FILE = "construction.toml"
    CONFIG_ENVIRONMENT_VARIABLE = "WERMERSET_CONFIG"

    def __init__(self, config_file: str = None, logger: logging.Logger = None):
        self.config = None
        self.config_file = config_file
        self.logger = logger or logging.getLogger("wermerset")
        self.commands: typing.Dict[str, typing.Any] = {}
        self.parser: typing.Optional[UsageParser] = None
        self.listeners: typing.Dict[str, typing.List[typing.Callable]] = collections.defaultdict(list)
        self.startup_time = dt.now()
        self.process = psutil.Process(os.getpid())

        # Kernel loggers sit under the runner's
        Construction.logger = self.logger.getChild("construction")
        self.reload_config()

    def reload_config(self):
        """Opens the config file, loads it (as TOML) and merges it over the defaults"""

        self.logger.info("Reloading config")
        config = copy.deepcopy(self.DEFAULT_CONFIG)
        config_file = self.config_file or os.environ.get(self.CONFIG_ENVIRONMENT_VARIABLE)
        if config_file:
            try:
                with open(config_file) as a:
                    loaded = toml.load(a)
            except Exception as e:
                self.logger.critical(f"Couldn't read config file - {e}")
                exit(1)
            for key, value in loaded.items():
                if isinstance(value, dict) and isinstance(config.get(key), dict):
                    config[key].update(value)
                else:
                    config[key] = value
        self.config = config

    def get_extensions(self) -> typing.List[str]:
        """Gets a list of module names of all the loadable command modules"""

        package = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        ext = sorted(glob.glob(os.path.join(package, "[!_]*.py")))
        extensions = ["wermerset." + os.path.basename(i)[:-3] for i in ext]
        self.logger.debug("Getting all extensions: " + str(extensions))
        return extensions

    def load_all_extensions(self):
        """Imports every command module and runs its setup hook"""

        self.logger.info("Loading extensions... ")
        for i in self.get_extensions():
            try:
                module = importlib.import_module(i)
                module.setup(self)
            except Exception as e:
                self.logger.critical(f"Error loading {i}")
                raise e
            self.logger.info(f" * {i} :: success")

    def add_command(self, command):
        if command.name is not None:
            self.commands[command.name] = command
        for event, func in command.get_listeners():
            self.listeners[event].append(func)

    def build_parser(self) -> UsageParser:
        """The global flags and one subparser per loaded command"""

        parser = UsageParser(prog="wermerset", description="Builds and checks truncations of the set X")
        parser.add_argument("--config", default=None, help="A TOML config file (or set WERMERSET_CONFIG)")
        parser.add_argument("--seed", type=int, default=None, help="Seed for every randomised sampler")
        parser.add_argument("--mode", choices=MODES, default=None, help="Which construction to run")
        parser.add_argument("--out", default=None, help="Directory the outputs are written to")
        parser.add_argument(
            "--loglevel",
            default=None,
            help="Global logging level - probably most useful is INFO and DEBUG",
        )
        parser.add_argument(
            "--loglevel-construction",
            default=None,
            help="Logging level for the construction and its selectors",
        )
        parser.add_argument(
            "--loglevel-analysis",
            default=None,
            help="Logging level for the analysis checks",
        )
        self.parser = parser
        subparsers = parser.add_subparsers(dest="command", parser_class=UsageParser)
        for name, command in sorted(self.commands.items()):
            subparser = subparsers.add_parser(name, help=command.help, description=command.help)
            command.add_arguments(subparser)
        return parser

    def mode(self, args: argparse.Namespace) -> str:
        mode = getattr(args, "mode", None) or self.config.get("mode", "modified")
        if mode not in MODES:
            raise ConfigError("mode", mode, f"should be one of {', '.join(MODES)}")
        return mode

    def grid_config(self, args: argparse.Namespace = None) -> GridConfig:
        """The [grid] table with the seed and stage flags laid over it"""

        grid = dict(self.config.get("grid", {}))
        if "seed" not in grid and "seed" in self.config:
            grid["seed"] = self.config["seed"]
        config = GridConfig.from_dict(grid)
        return config.with_overrides(seed=getattr(args, "seed", None))

    def out_dir(self, args: argparse.Namespace = None) -> str:
        path = getattr(args, "out", None) or self.config.get("out", ".")
        os.makedirs(path, exist_ok=True)
        return path

    def output_path(self, args: argparse.Namespace, filename: str) -> str:
        return os.path.join(self.out_dir(args), filename)

    def construction_path(self, args: argparse.Namespace) -> str:
        """--file if given, otherwise construction.toml in the output directory"""

        return getattr(args, "file", None) or self.output_path(args, self.CONSTRUCTION_FILE)

    def dispatch(self, event: str, *args) -> typing.List[typing.Any]:
        return [func(*args) for func in self.listeners.get(event, [])]

    def handle_error(self, args: typing.Optional[argparse.Namespace], error: Exception) -> int:
        """Hands an error to the on_command_error listeners and gives back their exit code"""

        codes = [code for code in self.dispatch("on_command_error", args, error) if code is not None]
        if not codes:
            raise error
        return codes[0]

    def run(self, args: argparse.Namespace) -> int:
        """Runs the chosen command, turning errors into exit codes"""

        command = self.commands.get(getattr(args, "command", None))
        if command is None:
            return self.handle_error(args, CommandUsageError("the command", None, f"one of {', '.join(sorted(self.commands))}"))
        self.logger.info(f"Running {command.name}")
        try:
            return command.run(args) or 0
        except Exception as e:
            return self.handle_error(args, e)

    def get_uptime(self) -> float:
        return (dt.now() - self.startup_time).total_seconds()

    def resource_line(self) -> str:
        """Resident memory, CPU time and wall time used so far"""

        times = self.process.cpu_times()
        return (
            f"Memory {self.process.memory_info()[0] / 2 ** 20:.2f}MB/{psutil.virtual_memory()[0] / 2 ** 20:.2f}MB, "
            f"CPU {times.user + times.system:.2f}s, wall {self.get_uptime():.2f}s"
        )
