import threading


class Counter(object):
  """A thread safe counter handing out item indices."""

  def __init__(self, val=0, max_val=0):
    self._value = val
    self.max_value = max_val
    self._lock = threading.Lock()

  def increment(self):
    """Returns (claimed, index): claimed is False once max_value is reached."""
    with self._lock:
      if self._value < self.max_value:
        self._value += 1
        return True, self._value - 1
      return False, self._value

  def get_value(self):
    with self._lock:
      return self._value


class WorkQueue(object):
  def __init__(self, func, items, num_threads=1):
    """
    Args:
      func: a function that takes an item and returns a result; jobs share
        nothing but the counter
      items: list of job inputs
      num_threads: num of parallel threads, >= 1
    """
    assert num_threads > 0, 'num_threads must be >= 1'
    self.func = func
    self.items = list(items)
    self.num_threads = min(num_threads, max(1, len(self.items)))
    self.ptr = Counter(max_val=len(self.items))
    self.results = [None] * len(self.items)
    self.errors = [None] * len(self.items)
    # Set by the first failure so the other threads stop claiming jobs.
    self.stop_event = threading.Event()

  def work(self):
    while not self.stop_event.is_set():
      claimed, i = self.ptr.increment()
      if not claimed:
        return
      try:
        self.results[i] = self.func(self.items[i])
      except BaseException as e:
        self.errors[i] = e
        self.stop_event.set()

  def run(self):
    """Run all jobs and return their results in item order. The exception of
    the first failing item (in item order) is re-raised."""
    if self.num_threads == 1:
      self.work()
    else:
      threads = [threading.Thread(target=self.work)
                 for _ in range(self.num_threads)]
      for t in threads:
        t.daemon = True
        t.start()
      for t in threads:
        t.join()
    for e in self.errors:
      if e is not None:
        raise e
    return self.results


def run_jobs(func, items, num_threads=1):
  return WorkQueue(func, items, num_threads).run()
