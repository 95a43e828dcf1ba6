"""Verification service and the checks it runs."""
