import asyncio
import functools
import logging
import time
from concurrent.futures import ThreadPoolExecutor

logger = logging.getLogger('ssnmbounds')


async def run_tasks(func, items, executor=None, update_callbacks=None):
    """
    Evaluate ``func(item)`` for every item on the executor and gather the results.

    asyncio.gather keeps the results in the order of ``items`` whatever order the
    workers finish in, so sweeps are reproducible for any thread count.

    Args:
        func (callable): Work for one grid point or trial block.
        items (list): Arguments, one per task.
        executor (Executor, optional): Pool to run on; asyncio's default thread pool otherwise.
        update_callbacks (dict, optional): ``"task_done"`` is called with (index, result).

    Returns:
        list: Results in item order.
    """
    async def run_in_thread(func, *args, **kwargs):
        if executor:
            return await asyncio.get_running_loop().run_in_executor(
                executor, functools.partial(func, *args, **kwargs))
        else:
            return await asyncio.to_thread(func, *args, **kwargs)

    async def run_one(index, item):
        result = await run_in_thread(func, item)
        if update_callbacks and "task_done" in update_callbacks:
            update_callbacks["task_done"](index, result)
        return result

    return await asyncio.gather(*(run_one(i, item) for i, item in enumerate(items)))


def run_parallel(func, items, threads=1, label="tasks"):
    """Synchronous front end to :func:`run_tasks`; threads <= 1 runs inline."""
    items = list(items)
    start = time.time()
    if threads is None or threads <= 1 or len(items) <= 1:
        results = [func(item) for item in items]
    else:
        with ThreadPoolExecutor(max_workers=int(threads)) as executor:
            results = asyncio.run(run_tasks(func, items, executor=executor))
    logger.debug(f"{label}: {len(items)} tasks on {max(1, threads or 1)} thread(s) in {time.time() - start:.2f}s")
    return list(results)
