"""Utilities package for helper functions and classes."""
