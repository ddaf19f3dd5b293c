# Value objects - Immutable data structures
