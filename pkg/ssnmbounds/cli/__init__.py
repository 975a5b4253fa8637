from ssnmbounds.cli.main import build_parser, cli_main

__all__ = ['build_parser', 'cli_main']
