from ssnmbounds.cli.main import main

main()
