"""
Progress tracking for long sweeps.
Reports weighted step progress through the application logger.
"""

import time
from contextlib import contextmanager
from typing import Any, Dict, List, Optional

from ..config.logging_config import get_logger

logger = get_logger(__name__)


class ProgressTracker:
    """Tracks and logs progress for multi-step operations."""

    def __init__(self, title: str = "Processing..."):
        """Initialize progress tracker.

        Args:
            title: Title used as prefix of every progress message
        """
        self.title = title
        self.steps: List[Dict] = []
        self.start_time: Optional[float] = None

    def add_step(self, name: str, description: str = "", weight: float = 1.0):
        """Add a step to track.

        Args:
            name: Step name/identifier
            description: Readable description
            weight: Relative weight of this step (for progress calculation)
        """
        self.steps.append({
            'name': name,
            'description': description or name,
            'weight': weight,
            'start_time': None,
            'end_time': None,
            'status': 'pending'  # pending, running, completed, failed
        })

    def _find(self, step_name: str) -> Optional[Dict]:
        for step in self.steps:
            if step['name'] == step_name:
                return step
        return None

    def start(self):
        self.start_time = time.perf_counter()
        logger.info(f"{self.title}: {len(self.steps)} steps")

    def start_step(self, step_name: str):
        step = self._find(step_name)
        if step is not None:
            step['status'] = 'running'
            step['start_time'] = time.perf_counter()
            logger.info(f"{self.title}: {step['description']} ({self.progress():.0%})")

    def complete_step(self, step_name: str, result: Any = None):
        step = self._find(step_name)
        if step is not None:
            step['status'] = 'completed'
            step['end_time'] = time.perf_counter()
            step['result'] = result
            logger.debug(f"{self.title}: {step_name} done in "
                         f"{step['end_time'] - step['start_time']:.3f}s")

    def fail_step(self, step_name: str, error: str):
        step = self._find(step_name)
        if step is not None:
            step['status'] = 'failed'
            step['end_time'] = time.perf_counter()
            step['error'] = error
            logger.error(f"{self.title}: {step_name} failed: {error}")

    def progress(self) -> float:
        """Completed share of the total weight, counting a running step as half done."""
        total_weight = sum(step['weight'] for step in self.steps)
        completed = sum(step['weight'] for step in self.steps if step['status'] == 'completed')
        running = sum(step['weight'] * 0.5 for step in self.steps if step['status'] == 'running')
        return min((completed + running) / max(total_weight, 1), 1.0)

    def finish(self) -> float:
        """Log the final status and return the elapsed wall time."""
        total_time = time.perf_counter() - self.start_time if self.start_time else 0.0
        failed = [step['name'] for step in self.steps if step['status'] == 'failed']
        if failed:
            logger.warning(f"{self.title} completed with errors in {failed} ({total_time:.1f}s)")
        else:
            logger.info(f"{self.title} completed successfully ({total_time:.1f}s)")
        return total_time

    @contextmanager
    def track_step(self, step_name: str):
        """Context manager for tracking a step.

        Usage:
            with tracker.track_step('compute'):
                records = compute(plan)
        """
        self.start_step(step_name)
        try:
            yield
            self.complete_step(step_name)
        except Exception as e:
            self.fail_step(step_name, str(e))
            raise


def create_sweep_tracker(parameter_count: int) -> ProgressTracker:
    """Progress tracker with the three phases of a sweep."""
    tracker = ProgressTracker(f"Sweep over {parameter_count} parameters")
    tracker.add_step("enumerate", "Enumerating parameters", weight=0.5)
    tracker.add_step("compute", "Computing metrics", weight=8.0)
    tracker.add_step("merge", "Merging records", weight=0.5)
    return tracker
