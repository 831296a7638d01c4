#!/usr/bin/env python3
"""
Wrapper script for running the CLI from the repository root.
Delegates to src/cli.py
"""
import os
import sys

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "src"))

from cli import main

if __name__ == "__main__":
    sys.exit(main())
