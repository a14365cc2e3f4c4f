"""
Configuration, validation and error utilities for Streamflow.
"""
