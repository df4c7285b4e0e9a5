"""Reference external visualization tool: t-SNE / UMAP embeddings of a
tabular dataset, rendered as scatter images over the agent wire protocol."""

__version__ = "0.1.0"
