"""CLI argument parser."""

import argparse
from pathlib import Path
from typing import Optional

COMMANDS = ("odmr", "ramsey", "polarize", "comag", "gyro", "run", "analyze")


class CLIArgumentParser:
    """Command-line argument parser for the gyroscope simulator."""

    def __init__(self):
        self.parser = self._create_parser()

    def _create_parser(self) -> argparse.ArgumentParser:
        """Create the argument parser."""
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--config", default="config.md", help="Path to the config.md file (default: config.md)")
        common.add_argument("--seed", type=int, help="Master random seed (overrides simulation.seed)")
        common.add_argument("--out", help="Output directory (overrides infrastructure.output_dir)")
        common.add_argument(
            "--no-shot-noise",
            dest="no_shot_noise",
            action="store_true",
            help="Disable photon shot noise everywhere",
        )

        parser = argparse.ArgumentParser(
            prog="nv-gyro-sim",
            description="NV nuclear-spin gyroscope simulator",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog="""
Examples:
  %(prog)s odmr
  %(prog)s ramsey --tau-max 50e-3 --points 2000
  %(prog)s run --config configs/low-noise.md --seed 7
  %(prog)s analyze --input Results/scenario.csv --column omega_nv_dps
            """
        )
        commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

        commands.add_parser("odmr", parents=[common], help="Transition table of the ground state")

        ramsey = commands.add_parser("ramsey", parents=[common], help="Double-quantum Ramsey fringe sweep")
        ramsey.add_argument("--tau-min", type=float, default=0.0, help="First free-evolution time in s")
        ramsey.add_argument("--tau-max", type=float, default=10e-3, help="Last free-evolution time in s")
        ramsey.add_argument("--points", type=int, default=500, help="Number of evolution times")

        polarize = commands.add_parser("polarize", parents=[common], help="Nuclear hyperpolarization sequence")
        polarize.add_argument("--iterations", type=int, help="Polarization iterations (default: protocol.n_iter)")
        polarize.add_argument(
            "--calibrate",
            type=float,
            metavar="TARGET",
            help="Search (q_preserve, pulse_fidelity) reaching TARGET m_i=0 population",
        )

        comag = commands.add_parser("comag", parents=[common], help="Comagnetometer / cothermometer tracking")
        comag.add_argument("--duration", type=float, default=1.0, help="Simulated time in s")
        comag.add_argument("--interval", type=float, help="Time between acquisition starts in s")
        comag.add_argument("--contour", action="store_true", help="Also write the dispersion contour")

        gyro = commands.add_parser("gyro", parents=[common], help="Gyro cycles at a constant rotation rate")
        gyro.add_argument("--duration", type=float, default=1.0, help="Simulated time in s")
        gyro.add_argument("--rate", type=float, default=0.0, help="Rotation rate in deg/s")

        run = commands.add_parser("run", parents=[common], help="Full scenario from the config")
        run.add_argument("--replicas", type=int, help="Independent replicas run in parallel")

        analyze = commands.add_parser("analyze", parents=[common], help="ASD and Allan deviation of a CSV column")
        analyze.add_argument("--input", help="Scenario CSV (default: <out>/scenario.csv)")
        analyze.add_argument("--column", default="omega_nv_dps", help="Column to analyze")
        analyze.add_argument("--segment", type=int, default=256, help="Welch segment length in samples")

        return parser

    def parse_args(self, args: Optional[list] = None):
        """Parse command line arguments."""
        return self.parser.parse_args(args)

    def validate_args(self, args):
        """Validate parsed arguments."""
        config_path = Path(args.config)
        if not config_path.exists():
            raise ValueError(f"Config file not found: {args.config}")

        if args.command == "ramsey":
            if args.tau_min < 0 or args.tau_max <= args.tau_min:
                raise ValueError(f"Need 0 <= --tau-min < --tau-max, got {args.tau_min} and {args.tau_max}")
            if args.points < 8:
                raise ValueError(f"--points must be at least 8, got {args.points}")

        if args.command in ("comag", "gyro") and args.duration <= 0:
            raise ValueError(f"--duration must be positive, got {args.duration}")

        if args.command == "comag" and args.interval is not None and args.interval <= 0:
            raise ValueError(f"--interval must be positive, got {args.interval}")

        if args.command == "polarize":
            if args.iterations is not None and args.iterations < 0:
                raise ValueError(f"--iterations cannot be negative, got {args.iterations}")
            if args.calibrate is not None and not 1.0 / 3.0 < args.calibrate < 1.0:
                raise ValueError(f"--calibrate target must lie in (1/3, 1), got {args.calibrate}")

        if args.command == "run" and args.replicas is not None and args.replicas < 1:
            raise ValueError(f"--replicas must be at least 1, got {args.replicas}")

        if args.command == "analyze" and args.segment < 8:
            raise ValueError(f"--segment must be at least 8, got {args.segment}")
