"""
O(2) gasket toolkit - process entry point
"""

from o2gasket.cli.main import main

if __name__ == "__main__":
    main()
