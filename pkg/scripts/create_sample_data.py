# create_sample_data.py script in scripts/
"""
Write simulated training/validation tables for trying the CLI

    python scripts/create_sample_data.py [output_dir] [seed]
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from hetvar.cli import main as cli_main


def main():
    output_dir = sys.argv[1] if len(sys.argv) > 1 else "sample_data"
    seed = sys.argv[2] if len(sys.argv) > 2 else "1"
    code = cli_main(["simulate", "--preset", "small_p", "--seed", seed, "--output-dir", output_dir])
    if code == 0:
        print(f"Wrote train.csv, validation.csv and truth.csv to {output_dir}/")
    return code


if __name__ == "__main__":
    sys.exit(main())
