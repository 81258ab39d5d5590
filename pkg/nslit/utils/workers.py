#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Thread pool used for grid columns and trajectory batches.

Results are returned in input order and every work item is computed by the
same code path, so the output does not depend on the number of threads.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

logger = logging.getLogger('commands')


def map_ordered(func, items, threads=1):
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    workers = min(int(threads), len(items))
    logger.debug('dispatching {} work items to {} threads'.format(len(items), workers))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
