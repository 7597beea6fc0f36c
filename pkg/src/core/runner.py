"""
Replicate runner for Monte Carlo batches.

The runner owns one random stream per replicate and evaluates a replicate
function over them on a thread pool. Results always come back ordered by
replicate index, so serial and parallel runs produce identical outputs.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, TypeVar

import numpy as np
from loguru import logger

from .streams import spawn_streams

T = TypeVar("T")


class ReplicateRunner:
    """
    Runs a replicate function over independent seeded streams.

    Failures of individual replicates are logged and counted; if every
    replicate fails the runner raises, otherwise the failing replicates are
    reported and their exceptions re-raised after the batch so that no
    partial result is silently written.

    Attributes:
        seed (int): Experiment seed
        replicates (int): Number of replicates
        threads (int): Worker count; 1 runs inline

    Examples:
        >>> runner = ReplicateRunner(seed=7, replicates=3)
        >>> runner.run(lambda r, rng: r)
        [0, 1, 2]
    """

    def __init__(self, seed: int, replicates: int, threads: int = 1):
        if replicates < 0:
            raise ValueError(f"replicates must be non-negative, got {replicates}")
        if threads <= 0:
            raise ValueError(f"threads must be positive, got {threads}")
        self.seed = seed
        self.replicates = replicates
        self.threads = threads

    def run(
        self,
        task: Callable[[int, np.random.Generator], T],
        label: Optional[str] = None,
    ) -> List[T]:
        """
        Evaluate `task(replicate_index, stream)` for every replicate.

        Args:
            task: Replicate function; must only use the stream it is given
            label: Name used in log lines

        Returns:
            List[T]: Results ordered by replicate index

        Raises:
            RuntimeError: If every replicate failed
            Exception: The first replicate failure, after the batch finishes
        """
        name = label or getattr(task, "__name__", "task")
        streams = spawn_streams(self.seed, self.replicates)
        logger.info(
            f"Running {self.replicates} replicate(s) of {name} "
            f"on {self.threads} thread(s)"
        )

        def guarded(index: int):
            try:
                return True, task(index, streams[index])
            except Exception as e:
                logger.error(f"Replicate {index} of {name} failed: {e}")
                return False, e

        if self.threads == 1 or self.replicates <= 1:
            outcomes = [guarded(index) for index in range(self.replicates)]
        else:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                outcomes = list(pool.map(guarded, range(self.replicates)))

        failed = [value for ok, value in outcomes if not ok]
        if failed and len(failed) == self.replicates:
            raise RuntimeError(f"All {self.replicates} replicates of {name} failed") from failed[0]
        if failed:
            logger.warning(f"{len(failed)} of {self.replicates} replicates of {name} failed")
            raise failed[0]

        logger.debug(f"All replicates of {name} finished")
        return [value for _, value in outcomes]
