"""dslab: exact and numerical verification of Darling-Siegert walk identities and the Bessel integrals behind them."""

__version__ = "0.1.0"


def main():
    """Main entry point for the package."""
    from .cli import main as cli_main

    cli_main()


__all__ = ["main", "__version__"]
