"""
Storage module for ifsweep.
Flat-file result store with CSV and binary measure exports.
"""

from .storage_manager import ResultStore, get_result_store, measure_from_bytes, measure_to_bytes

__all__ = ['ResultStore', 'get_result_store', 'measure_from_bytes', 'measure_to_bytes']
