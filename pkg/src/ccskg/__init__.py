"""Climate-projection knowledge graph toolchain."""

__version__ = "0.1.0"
