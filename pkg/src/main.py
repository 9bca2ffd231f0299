import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.cli import run_cli

if __name__ == "__main__":
    sys.exit(run_cli(sys.argv[1:]))
