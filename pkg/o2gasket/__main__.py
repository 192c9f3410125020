from o2gasket.cli.main import main

main()
