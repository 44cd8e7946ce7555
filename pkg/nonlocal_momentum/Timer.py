import time


class Timer:
    """Wall-clock time of verification cases"""

    _start_time = 0.0
    diff = 0.0

    def __time(self):
        return time.perf_counter()

    def start(self):
        self._start_time = self.__time()

    def split(self):
        """Seconds since the last start or split; restarts the clock"""
        self.diff = self.__time() - self._start_time
        self.start()
        return self.diff

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, *exc):
        self.split()
        return False
