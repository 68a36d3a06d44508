"""ontoscaffold: ontology scaffold graphs from standards text.

Pipeline stages: document segmentation, candidate term mining,
constrained LLM relation inference (with record/replay cassettes),
term normalization and validation, scaffold graph assembly,
cross-section alignment, and a threshold-sweep evaluation harness.
"""

__version__ = "0.1.0"
