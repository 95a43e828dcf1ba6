"""Subcommands of the k3ml command line."""
