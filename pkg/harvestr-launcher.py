#!/usr/bin/env python
"""
Launcher for the Harvestr CLI tool.
"""

import sys


def show_startup_message():
    """Show a simple startup message while imports are loading."""
    # stderr, so CSV written to stdout stays clean
    print("Starting Harvestr...", file=sys.stderr, flush=True)
    print("Please wait while dependencies are loaded...", file=sys.stderr, flush=True)


if __name__ == "__main__":
    # Show startup message first
    show_startup_message()

    # Import main function - this may take a moment
    from harvestr.cli import main

    # Run the main function
    sys.exit(main())
