import argparse
import sys
from typing import List, Optional

from fraccond_core.services.cli_io.command_runner import CommandRunner
from fraccond_core.services.cli_io.config_loader import ConfigLoader
from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.config_manager import ConfigManager
from fraccond_core.utils.constants.enums import CliCommand, ExportTarget
from fraccond_core.utils.constants.error_codes import ExitCodes
from fraccond_core.utils.exceptions import HandledNumericsError, UnhandledNumericsError

PACKAGE_PREFIX = "fraccond_core.services."


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fraccond", description="Fractional conductivity counterexample toolkit.")
    parser.add_argument("--debug", action="store_true", help="Log at DEBUG level.")
    commands = parser.add_subparsers(dest="command", required=True)

    construct = commands.add_parser(CliCommand.CONSTRUCT.value, help="Build a counterexample conductivity.")
    construct.add_argument("--config", required=True, help="Path to the YAML run configuration.")

    verify = commands.add_parser(CliCommand.VERIFY.value, help="Compare the DN data of two construct runs.")
    verify.add_argument("--a", required=True, help="First construct run directory.")
    verify.add_argument("--b", required=True, help="Second construct run directory.")

    sweep = commands.add_parser(CliCommand.SWEEP.value, help="Run the refinement study.")
    sweep.add_argument("--config", required=True, help="Path to the YAML run configuration.")

    oracle = commands.add_parser(CliCommand.ORACLE_CHECK.value, help="Cross-validate the operator realizations.")
    oracle.add_argument("--config", default=None, help="Optional run configuration supplying s and tolerances.")

    export = commands.add_parser(CliCommand.EXPORT.value, help="Export DN matrices, fields or study tables as CSV.")
    export.add_argument("--input", required=True, help="Run directory to export from.")
    export.add_argument("--what", required=True, choices=[target.value for target in ExportTarget])
    return parser


def error_module(error: BaseException) -> str:
    """Service module of the innermost frame that raised the error."""
    module = "cli"
    traceback = error.__traceback__
    while traceback is not None:
        name = traceback.tb_frame.f_globals.get("__name__", "")
        if name.startswith(PACKAGE_PREFIX):
            module = name[len(PACKAGE_PREFIX) :].split(".")[0]
        traceback = traceback.tb_next
    return module


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    AppLogger.set_logger_config(debug=args.debug, stream=sys.stderr)
    ConfigManager.initialize()
    command = CliCommand(args.command)
    try:
        config_path = getattr(args, "config", None)
        config = ConfigLoader.load_config(config_path) if config_path else None
        result = CommandRunner.run_command(
            command,
            config,
            a=getattr(args, "a", None),
            b=getattr(args, "b", None),
            input_dir=getattr(args, "input", None),
            what=getattr(args, "what", None),
        )
    except HandledNumericsError as error:
        AppLogger.log_warn(f"[{error_module(error)}] {error.error_code} {error.message}")
        return ExitCodes.HANDLED_ERROR.value
    except UnhandledNumericsError as error:
        AppLogger.log_error(f"[{error_module(error)}] {error.error_code} {error.message}")
        return ExitCodes.UNHANDLED_ERROR.value
    except OSError as error:
        AppLogger.log_warn(f"[cli_io] {error}")
        return ExitCodes.HANDLED_ERROR.value
    except Exception as error:  # noqa: BLE001
        AppLogger.log_error(f"[{error_module(error)}] unexpected failure: {error}")
        return ExitCodes.UNHANDLED_ERROR.value
    if result.output:
        sys.stdout.write(result.output + "\n")
    return result.exit_code.value


if __name__ == "__main__":
    sys.exit(main())
