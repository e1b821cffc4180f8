"""
qdeform - phase-space distributions of the q-deformed harmonic oscillator
Entry point for the command line
"""
import logging
import sys

# Setup logging (stderr keeps CSV/JSON on stdout clean)
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr,
)
log = logging.getLogger(__name__)


def main():
    """Main entry point"""
    from src.cli.app import run

    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
