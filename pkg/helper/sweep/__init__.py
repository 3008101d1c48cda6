"""
Parameter sweeps: Farey enumeration, parallel per-parameter analysis and reports.
"""

from .plan import METRICS, SweepPlan, farey_slopes, load_plan, plan_from_text
from .reports import emit_report, records_from_json, records_to_csv, records_to_json
from .runner import SweepRecord, analyze_parameter, run_sweep

__all__ = [
    'METRICS', 'SweepPlan', 'SweepRecord', 'analyze_parameter', 'emit_report',
    'farey_slopes', 'load_plan', 'plan_from_text', 'records_from_json',
    'records_to_csv', 'records_to_json', 'run_sweep',
]
