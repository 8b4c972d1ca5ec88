from . import convert


class Container(object):
    """
    Base for the immutable computational objects (groups, graphs).
    Derived data is computed on first access and memoized under the
    attribute names listed in `cached_properties`.
    """

    cached_properties = []

    def flush_cache(self, properties=None):
        props = self.cached_properties if properties is None else properties
        for p in props:
            if hasattr(self, p):
                delattr(self, p)

    def cached(self, name, compute):
        if hasattr(self, name):
            return getattr(self, name)
        value = compute()
        setattr(self, name, value)
        return value

    def __enter__(self):
        return self

    def __exit__(self, type, value, traceback):
        self.flush_cache()


Container.to_json = convert.to_json
