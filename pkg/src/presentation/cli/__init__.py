# CLI interface 