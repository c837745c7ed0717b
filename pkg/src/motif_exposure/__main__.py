import sys

from motif_exposure.cli import main


if __name__ == '__main__':
    sys.exit(main())
