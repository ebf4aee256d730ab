import argparse
from typing import List


def float_list(text: str) -> List[float]:
    """'0,0.1,0.5' -> [0.0, 0.1, 0.5]"""
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {e}")


def add_resource_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--builtin", help="perfect | mixed | phasegate[:theta:n] | perm[:n]")
    source.add_argument("--resource-file", help="JSON resource file (dense or Bell-diagonal)")
    parser.add_argument("--theta", type=float, help="phase-gate angle in radians")
    parser.add_argument("--n", type=int, help="number of pairs")
    parser.add_argument("--periodic", action="store_true", help="close the phase-gate chain into a ring")


def add_output_arguments(parser: argparse.ArgumentParser, archive: bool = True) -> None:
    parser.add_argument("--out", help="output path (stdout if omitted)")
    parser.add_argument("--format", choices=["json", "csv", "plotdata"])
    if archive:
        parser.add_argument(
            "--archive", action="store_true", default=None, help="store results in the archive database"
        )
