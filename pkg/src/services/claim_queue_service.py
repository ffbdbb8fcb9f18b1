"""Claim queue service for running certification families concurrently."""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from src.models.reports import CertificationReport

logger = logging.getLogger(__name__)

FamilyRunner = Callable[[str, int], list[CertificationReport]]


class ClaimStatus(Enum):
    """Status of a claim family."""

    PENDING = "pending"
    IN_PROGRESS = "in_progress"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class ClaimTask:
    """A claim family in the queue."""

    family: str
    index: int
    status: ClaimStatus = ClaimStatus.PENDING
    error: Optional[str] = None
    reports: list[CertificationReport] = field(default_factory=list)

    def __lt__(self, other: "ClaimTask") -> bool:
        """Order tasks by family index."""
        return self.index < other.index


@dataclass
class QueueStatus:
    """Status of the claim queue."""

    is_running: bool
    queue_length: int
    in_progress: list[str]
    completed_count: int
    failed_count: int


class ClaimQueueService:
    """Runs claim families on a thread pool and collects their reports.

    Families are independent: each one derives its own random generator
    from the seed and its index, so scheduling never changes a result.
    Results are returned in family-index order.
    """

    def __init__(self, runner: FamilyRunner, workers: int = 1):
        """Initialize the claim queue.

        Args:
            runner: Callback taking (family, index) and returning its reports.
            workers: Number of families run at once.
        """
        self.runner = runner
        self.workers = max(1, workers)
        self._queue: list[ClaimTask] = []
        self._tasks: list[ClaimTask] = []
        self._is_running = False
        self._completed_count = 0
        self._failed_count = 0
        self._lock = threading.Lock()

    def queue_family(self, family: str, index: int) -> bool:
        """Add a family to the queue.

        Returns:
            True if added, False if the family is already queued.
        """
        with self._lock:
            if any(t.family == family for t in self._tasks):
                logger.debug(f"Family {family} already queued")
                return False
            task = ClaimTask(family=family, index=index)
            self._queue.append(task)
            self._tasks.append(task)
            self._queue.sort()
            logger.debug(f"Queued claim family {family} (index {index})")
            return True

    def _get_next_task(self) -> Optional[ClaimTask]:
        with self._lock:
            if self._queue:
                return self._queue.pop(0)
            return None

    def _process(self, task: ClaimTask) -> None:
        task.status = ClaimStatus.IN_PROGRESS
        try:
            task.reports = self.runner(task.family, task.index)
            task.status = ClaimStatus.COMPLETED
            with self._lock:
                self._completed_count += 1
            logger.info(f"Completed claim family {task.family}: {len(task.reports)} reports")
        except Exception as e:
            task.status = ClaimStatus.FAILED
            task.error = str(e)
            with self._lock:
                self._failed_count += 1
            logger.error(f"Claim family {task.family} failed: {e}")

    def _worker(self) -> None:
        while True:
            task = self._get_next_task()
            if task is None:
                return
            self._process(task)

    def run(self) -> list[ClaimTask]:
        """Process every queued family and return all tasks in index order."""
        self._is_running = True
        logger.info(f"Started claim queue with {self.workers} worker(s)")
        try:
            if self.workers == 1:
                self._worker()
            else:
                with ThreadPoolExecutor(max_workers=self.workers) as pool:
                    for future in [pool.submit(self._worker) for _ in range(self.workers)]:
                        future.result()
        finally:
            self._is_running = False
            logger.info("Stopped claim queue")
        return sorted(self._tasks)

    def get_queue_status(self) -> QueueStatus:
        """Get current queue status."""
        with self._lock:
            return QueueStatus(
                is_running=self._is_running,
                queue_length=len(self._queue),
                in_progress=[
                    t.family for t in self._tasks if t.status is ClaimStatus.IN_PROGRESS
                ],
                completed_count=self._completed_count,
                failed_count=self._failed_count,
            )
