"""
Fan-out of independent work items (episode batches) over worker processes.
"""

import sys

from spruce import state
from spruce.exceptions import NumericError, SpruceError
from spruce.job_queue import JobQueue


def batched(items, pool_size):
    """
    Split ``items`` into at most ``pool_size`` contiguous, ordered batches.
    """
    items = list(items)
    pool_size = max(1, min(pool_size, len(items)))
    size, extra = divmod(len(items), pool_size)
    batches, start = [], 0
    for i in range(pool_size):
        stop = start + size + (1 if i < extra else 0)
        if stop > start:
            batches.append(items[start:stop])
        start = stop
    return batches


def _run_batch(func, batch, name, queue):
    """
    Worker body: apply ``func`` to each item and ship results home.

    Exceptions are shipped too (they are pickle-safe), then the process exits
    nonzero so the parent notices.
    """
    try:
        result = [func(item) for item in batch]
    except BaseException as e:
        queue.put({'name': name, 'result': e})
        sys.exit(1)
    queue.put({'name': name, 'result': result})


def execute(func, items, pool_size=None):
    """
    Apply ``func`` to every element of ``items`` and return the results in
    input order.

    With ``pool_size`` (default ``env.threads``) greater than one, items are
    split into ordered batches, each run in a fork-started child process via
    `~spruce.job_queue.JobQueue`. Results never depend on the pool size: the
    output list is reassembled in batch order.

    If any child fails, the first failure is re-raised in the parent (a
    `~spruce.exceptions.SpruceError` as-is, anything else wrapped in a
    `~spruce.exceptions.NumericError`).
    """
    items = list(items)
    if pool_size is None:
        pool_size = state.env.threads
    if pool_size <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    import multiprocessing
    ctx = multiprocessing.get_context('fork')
    queue = ctx.Queue()
    batches = batched(items, pool_size)
    jobs = JobQueue(len(batches), queue)
    if state.output.debug:
        jobs._debug = True
    names = []
    for i, batch in enumerate(batches):
        name = "batch-%04d" % i
        names.append(name)
        p = ctx.Process(target=_run_batch, args=(func, batch, name, queue))
        p.name = name
        jobs.append(p)
    jobs.close()
    ran_jobs = jobs.run()

    results = []
    for name in names:
        d = ran_jobs[name]
        if d['exit_code'] != 0 or isinstance(d['results'], BaseException):
            err = d['results']
            if isinstance(err, SpruceError):
                raise err
            raise NumericError(
                "Worker %s failed (exit code %s)" % (name, d['exit_code']),
                wrapped=err,
            )
        results.extend(d['results'])
    return results
