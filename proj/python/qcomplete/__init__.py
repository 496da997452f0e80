"""Query completion: suggest k disjoint refinements of a SELECT-FROM-WHERE query."""

import functools
import json

from . import _qcomplete

__all__ = ["Database", "QueryError", "render"]


class QueryError(Exception):
    """Raised for every engine error; ``code`` is the machine-readable kind."""

    def __init__(self, code, message, detail=None):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
        self.detail = detail


def _translate(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except _qcomplete.Error as exc:
            payload = json.loads(str(exc))
            raise QueryError(payload["code"], payload["message"], payload.get("detail")) from None

    return wrapper


class Database:
    """An in-memory set of named relations."""

    def __init__(self):
        self._db = _qcomplete.Database()

    @_translate
    def load_csv(self, path, name=None):
        if name is None:
            import pathlib

            name = pathlib.Path(path).stem
        return json.loads(self._db.load_csv(str(path), name))

    @_translate
    def load_csv_text(self, name, text):
        return json.loads(self._db.load_csv_text(name, text))

    @_translate
    def load_workspace(self, directory):
        self._db.load_workspace(str(directory))

    @_translate
    def demo_packages(self, seed=1, cities=30, packages=11000):
        self._db.demo_packages(seed, cities, packages)

    @_translate
    def schema(self):
        return json.loads(self._db.schema())

    @_translate
    def query(self, sql, max_rows=_qcomplete.DEFAULT_MAX_ROWS):
        return json.loads(self._db.query(sql, max_rows))

    @_translate
    def complete(self, sql, k, seed=0, max_rows=None, config=None, verify=False, labels=None):
        body = {"seed": seed, "config": config or {}}
        if max_rows is not None:
            body["max_rows"] = max_rows
        return json.loads(self._db.complete(sql, k, json.dumps(body), verify, labels))


@_translate
def render(sql):
    """Parses ``sql`` and renders it in canonical form."""
    return _qcomplete.render(sql)
