"""Gate-level evolution strategy."""
