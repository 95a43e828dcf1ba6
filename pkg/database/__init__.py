"""Archive of verification runs and their reports."""
