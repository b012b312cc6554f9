from friendgraph.cli import main

main()
