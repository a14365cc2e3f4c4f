"""
Streamflow

Reconstructs the mesoscale history of a temporal network: per-window community
detection, cross-window linking, ephemeral split/merge correction, complexity-score
model selection and laminar stream extraction.
"""

__version__ = "0.1.0"
