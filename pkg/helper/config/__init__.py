"""
Configuration and logging for ifsweep.
"""
