"""Post-generation escalation routing between vector and graph RAG backends."""

__version__ = "0.1.0"
