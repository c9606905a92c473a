from arof.cli import main

main()
