#!/usr/bin/env python3
"""
abq-forms
Main entry point for the command-line tools.
"""

import sys
import os

# Add the src directory to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from src.cli.app import run


def main():
    """Run the CLI and exit with its status code."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
