#!/usr/bin/env python3
"""
CLI Launcher for the kstandard engine
Puts the repository root on sys.path before running the command-line interface
"""

import os
import sys


def main():
    # Get the directory where this script is located
    script_dir = os.path.dirname(os.path.abspath(__file__))
    repo_root = os.path.dirname(script_dir)
    if repo_root not in sys.path:
        sys.path.insert(0, repo_root)

    from kstandard.scripts.kstandard_cli import main as cli_main

    try:
        return cli_main(sys.argv[1:])
    except KeyboardInterrupt:
        print("\nOperation cancelled by user")
        return 1


if __name__ == '__main__':
    sys.exit(main())
