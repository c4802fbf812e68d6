from weylith.cli import main

main()
