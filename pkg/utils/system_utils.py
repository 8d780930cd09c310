# -*- coding: utf-8 -*-
"""
System resource detection.
Used to pick a default worker-process count for CPU-bound solving.
"""

import logging
import multiprocessing
import os

import psutil

logger = logging.getLogger(__name__)


def get_system_resources() -> dict:
    """
    Collect CPU and memory information.

    Returns:
        dict: logical/physical core counts, memory totals and current usage
    """
    try:
        cpu_count = multiprocessing.cpu_count()

        try:
            cpu_physical_count = psutil.cpu_count(logical=False) or cpu_count
        except Exception:
            cpu_physical_count = cpu_count

        mem = psutil.virtual_memory()

        try:
            cpu_percent = psutil.cpu_percent(interval=0.1)
        except Exception:
            cpu_percent = 0.0

        return {
            "cpu_count": cpu_count,
            "cpu_physical_count": cpu_physical_count,
            "total_mem_gb": round(mem.total / (1024 ** 3), 2),
            "available_mem_gb": round(mem.available / (1024 ** 3), 2),
            "mem_usage_percent": mem.percent,
            "cpu_percent": cpu_percent,
        }
    except Exception as e:
        logger.warning("failed to read system resources: %s", e)
        return {
            "cpu_count": os.cpu_count() or 2,
            "cpu_physical_count": os.cpu_count() or 2,
            "total_mem_gb": 4.0,
            "available_mem_gb": 2.0,
            "mem_usage_percent": 50.0,
            "cpu_percent": 0.0,
        }


def calculate_optimal_workers(mem_per_worker_gb: float = 0.5) -> int:
    """
    Compute a worker-process count from the current machine load.

    Solver and Monte Carlo workers are CPU bound, so the count is capped by
    physical cores and then by the memory each worker may need (memo tables
    grow with the search).

    Args:
        mem_per_worker_gb: estimated peak memory per worker process

    Returns:
        int: worker count, at least 1
    """
    try:
        resources = get_system_resources()
        physical = resources["cpu_physical_count"]
        cpu_percent = resources["cpu_percent"]
        mem_usage_percent = resources["mem_usage_percent"]

        if cpu_percent > 80:
            cpu_based_max = max(1, int(physical * 0.5))
        elif cpu_percent > 60:
            cpu_based_max = max(1, int(physical * 0.75))
        else:
            cpu_based_max = physical

        # Keep 1GB for the parent process and the OS
        usable_mem_gb = max(0.5, resources["available_mem_gb"] - 1.0)
        if mem_usage_percent > 80:
            usable_mem_gb *= 0.5
        mem_based_max = max(1, int(usable_mem_gb / mem_per_worker_gb))

        return max(1, min(cpu_based_max, mem_based_max))
    except Exception as e:
        logger.warning("failed to compute worker count: %s", e)
        return 1


if __name__ == "__main__":
    for key, value in get_system_resources().items():
        print(f"{key}: {value}")
    print(f"recommended_workers: {calculate_optimal_workers()}")
