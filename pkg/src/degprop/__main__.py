from degprop.cli import main

main()
