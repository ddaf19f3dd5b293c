#!/usr/bin/env python3
"""
NV Gyroscope Simulator - Main Entry Point

Simulates a rotation sensor built on the 14N nuclear spin of NV centers in
diamond, with an interleaved comagnetometer / cothermometer for drift
compensation.
"""

import sys
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from presentation.cli.main import main as cli_main


def main():
    """Main entry point for the NV gyroscope simulator."""
    try:
        cli_main()
    except KeyboardInterrupt:
        print("\nOperation cancelled by user.")
        sys.exit(1)


if __name__ == "__main__":
    main()
