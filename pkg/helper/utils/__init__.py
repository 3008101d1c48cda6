"""
Utility modules: progress tracking for long sweeps.
"""
