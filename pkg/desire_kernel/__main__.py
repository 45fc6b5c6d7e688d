import sys

from desire_kernel.cli.commands import run


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
