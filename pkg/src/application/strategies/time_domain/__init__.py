"""Rotating-frame time-domain evolution strategy."""
