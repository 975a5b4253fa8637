from ssnmbounds.workers.pool_worker import run_parallel, run_tasks

__all__ = ['run_parallel', 'run_tasks']
