"""Tests for ClaimQueueService - concurrent execution of claim families.

These tests verify the queue orders families by index, rejects duplicates,
and isolates failures of a single family.
"""

import threading
from unittest.mock import MagicMock

import pytest

from src.services.claim_queue_service import (
    ClaimQueueService,
    ClaimStatus,
    ClaimTask,
    QueueStatus,
)
from tests.fixtures.sample_data import create_report


def echo_runner(family: str, index: int):
    """Return one report tagged with the family name and index."""
    return [create_report(claim_id=family, params={"index": index})]


def queue_all(service: ClaimQueueService, families: list[str]) -> None:
    """Queue families indexed by position."""
    for index, family in enumerate(families):
        service.queue_family(family, index)


class TestClaimTaskOrdering:
    """Test ClaimTask ordering."""

    def test_lower_index_comes_first(self):
        """Verify tasks sort by family index."""
        assert ClaimTask(family="b", index=0) < ClaimTask(family="a", index=1)

    def test_new_task_is_pending(self):
        """Verify the initial task state."""
        task = ClaimTask(family="krok1", index=0)

        assert task.status is ClaimStatus.PENDING
        assert task.reports == []
        assert task.error is None


class TestClaimQueueServiceBasic:
    """Test basic queue operations."""

    @pytest.fixture
    def queue_service(self):
        """Create a single-worker ClaimQueueService."""
        return ClaimQueueService(echo_runner)

    def test_queue_family_adds_task(self, queue_service):
        """Verify queue_family adds a pending task."""
        assert queue_service.queue_family("krok1", 0) is True

        status = queue_service.get_queue_status()
        assert status.queue_length == 1
        assert not status.is_running

    def test_queue_family_rejects_duplicate(self, queue_service):
        """Verify a family cannot be queued twice."""
        queue_service.queue_family("krok1", 0)

        assert queue_service.queue_family("krok1", 1) is False
        assert queue_service.get_queue_status().queue_length == 1

    def test_run_orders_by_index_not_insertion(self, queue_service):
        """Verify families queued out of order run and return by index."""
        queue_service.queue_family("krok1", 9)
        queue_service.queue_family("lema2", 3)

        tasks = queue_service.run()
        assert [(t.family, t.index) for t in tasks] == [("lema2", 3), ("krok1", 9)]

    def test_get_queue_status_returns_correct_type(self, queue_service):
        """Verify get_queue_status returns QueueStatus."""
        assert isinstance(queue_service.get_queue_status(), QueueStatus)

    def test_workers_at_least_one(self):
        """Verify non-positive worker counts fall back to one."""
        assert ClaimQueueService(echo_runner, workers=0).workers == 1


class TestClaimQueueServiceRun:
    """Test running families."""

    def test_run_collects_reports(self):
        """Verify every family's reports are attached to its task."""
        service = ClaimQueueService(echo_runner)
        queue_all(service, ["krok1", "lema2"])

        tasks = service.run()

        assert all(t.status is ClaimStatus.COMPLETED for t in tasks)
        assert [t.reports[0].claim_id for t in tasks] == ["krok1", "lema2"]
        assert service.get_queue_status().completed_count == 2

    def test_run_with_workers_keeps_index_order(self):
        """Verify a multi-worker run still returns tasks by index."""
        service = ClaimQueueService(echo_runner, workers=4)
        families = [f"family{i}" for i in range(10)]
        queue_all(service, families)

        tasks = service.run()

        assert [t.family for t in tasks] == families
        assert [t.reports[0].params["index"] for t in tasks] == list(range(10))

    def test_runs_concurrently(self):
        """Verify two workers can hold families at the same time."""
        barrier = threading.Barrier(2, timeout=5)

        def runner(family, index):
            barrier.wait()
            return []

        service = ClaimQueueService(runner, workers=2)
        queue_all(service, ["a", "b"])

        tasks = service.run()

        assert all(t.status is ClaimStatus.COMPLETED for t in tasks)

    def test_failure_is_isolated(self):
        """Verify one failing family does not stop the others."""
        runner = MagicMock(side_effect=[RuntimeError("boom"), [create_report()]])
        service = ClaimQueueService(runner)
        queue_all(service, ["bad", "good"])

        tasks = service.run()

        assert tasks[0].status is ClaimStatus.FAILED
        assert tasks[0].error == "boom"
        assert tasks[1].status is ClaimStatus.COMPLETED
        status = service.get_queue_status()
        assert status.failed_count == 1
        assert status.completed_count == 1
