import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from anharmonic.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class CellPool:
    """Runs independent table cells in worker processes, results in submission order."""

    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers or settings.MAX_CONCURRENT_CELLS
        self.semaphore: Optional[asyncio.Semaphore] = None

    async def _run_with_semaphore(self, loop, executor, fn: Callable[[T], R], index: int, arg: T) -> R:
        async with self.semaphore:
            logger.info("cell %d started", index)
            result = await loop.run_in_executor(executor, fn, arg)
            logger.info("cell %d finished", index)
            return result

    async def map_async(self, fn: Callable[[T], R], args: Sequence[T]) -> List[R]:
        self.semaphore = asyncio.Semaphore(self.max_workers)
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=self.max_workers) as executor:
            tasks = [
                self._run_with_semaphore(loop, executor, fn, i, arg)
                for i, arg in enumerate(args)
            ]
            # gather keeps submission order regardless of completion order
            return await asyncio.gather(*tasks)

    def map(self, fn: Callable[[T], R], args: Sequence[T]) -> List[R]:
        if self.max_workers <= 1 or len(args) <= 1:
            logger.info("running %d cells in-process", len(args))
            return [fn(arg) for arg in args]
        logger.info("running %d cells on %d workers", len(args), self.max_workers)
        return asyncio.run(self.map_async(fn, args))
