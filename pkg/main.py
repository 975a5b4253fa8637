# main.py
import sys

from ssnmbounds.cli.main import cli_main


def main():
    """Main entry point for the command-line tool"""
    return cli_main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
