import logging
import sys
import warnings

from wermerset import utils


# Set up the loggers
def set_log_level(logger_to_change: logging.Logger, loglevel: str):
    if loglevel is None:
        return
    if isinstance(logger_to_change, str):
        logger_to_change = logging.getLogger(logger_to_change)
    level = getattr(logging, loglevel.upper(), None)
    if level is None:
        raise ValueError(
            f"The log level {loglevel.upper()} wasn't found in the logging module"
        )
    logger_to_change.setLevel(level)


def main(argv: list = None) -> int:
    """Parses argv, configures logging and runs one command, giving back its exit code"""

    logger = logging.getLogger("wermerset")
    runner = utils.Runner(logger=logger)
    runner.load_all_extensions()
    parser = runner.build_parser()

    # Parse arguments
    try:
        args = parser.parse_args(argv)
    except utils.errors.CommandUsageError as e:
        return runner.handle_error(None, e)

    # Config file from the command line
    if args.config:
        runner.config_file = args.config
        runner.reload_config()

    # Set loglevel defaults, then config, then per-subsystem flags
    levels = runner.config.get("logging", {})
    try:
        set_log_level(logger, args.loglevel or levels.get("level", "INFO"))
        set_log_level("wermerset.construction", args.loglevel_construction or levels.get("construction"))
        set_log_level("wermerset.analysis", args.loglevel_analysis or levels.get("analysis"))
    except ValueError as e:
        return runner.handle_error(args, utils.errors.CommandUsageError("--loglevel", str(e), "a logging level name"))

    return runner.run(args)


if __name__ == "__main__":
    logging.basicConfig(
        format="%(asctime)s:%(name)s:%(levelname)s: %(message)s", stream=sys.stdout
    )

    # Overflow in moduli of huge products is expected and clamped
    warnings.filterwarnings("ignore", category=RuntimeWarning)
    sys.exit(main())
