"""
Pipeline stages for Streamflow.
"""
