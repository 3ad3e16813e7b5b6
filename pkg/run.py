"""Quick start script for development: runs the verification suite, or passes its arguments to the CLI"""
import sys

from emcontrol.harness.cli import main

if __name__ == "__main__":
    args = sys.argv[1:] or ["verify"]
    sys.exit(main(args))
