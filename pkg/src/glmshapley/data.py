"""Dataset container: response, grouped regressor columns, subset selection.

A regressor group ("player") is the unit of the importance game.  A
multi-level factor expands into several dummy columns but remains a single
player, so it receives a single Shapley value.  The intercept is always
present implicitly and is never a player.
"""

from dataclasses import dataclass, replace

import numpy as np
import pandas as pd

from .exceptions import (
    ColumnError,
    ConfigError,
    DataError,
    DegenerateColumnError,
    MissingValueError,
    ResponseTypeError,
)


@dataclass(frozen=True)
class Player:
    """A named regressor group owning a set of design-matrix columns."""

    name: str
    columns: tuple


@dataclass(frozen=True)
class Dataset:
    """Immutable design data for one analysis.

    ``design`` excludes the intercept, which every model carries
    implicitly.  Every design column belongs to exactly one player.
    """

    y: np.ndarray
    design: np.ndarray
    players: tuple
    column_names: tuple
    response_name: str = "y"

    def __post_init__(self):
        y = np.ascontiguousarray(np.asarray(self.y, dtype=float).ravel())
        design = np.ascontiguousarray(np.asarray(self.design, dtype=float))
        if design.ndim != 2:
            raise DataError("design must be a 2-d array")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "design", design)
        object.__setattr__(self, "players", tuple(self.players))
        object.__setattr__(self, "column_names", tuple(self.column_names))
        n, m = design.shape
        if len(y) != n:
            raise DataError("response length does not match design rows")
        if len(self.column_names) != m:
            raise DataError("column_names length does not match design columns")
        if n < m + 1:
            raise DataError(
                f"need more observations than columns plus intercept (n={n}, m={m})"
            )
        names = [p.name for p in self.players]
        if len(set(names)) != len(names):
            raise ConfigError("player names must be unique")
        seen = set()
        for p in self.players:
            cols = tuple(int(c) for c in p.columns)
            if not cols:
                raise ConfigError(f"player '{p.name}' owns no columns")
            for c in cols:
                if c < 0 or c >= m:
                    raise ConfigError(f"player '{p.name}' references column {c} out of range")
                if c in seen:
                    raise ConfigError(f"column {c} assigned to more than one player")
                seen.add(c)
        if seen != set(range(m)):
            raise ConfigError("players must cover every design column exactly once")
        y.flags.writeable = False
        design.flags.writeable = False

    @property
    def n(self):
        return self.design.shape[0]

    @property
    def m(self):
        return self.design.shape[1]

    @property
    def p(self):
        return len(self.players)

    @property
    def full_mask(self):
        return (1 << self.p) - 1

    @property
    def player_names(self):
        return tuple(p.name for p in self.players)

    def columns_for(self, mask):
        """Design-column indices of the players included in ``mask``."""
        mask = int(mask)
        if mask < 0 or mask > self.full_mask:
            raise ConfigError(f"subset mask {mask} out of range for p={self.p}")
        cols = []
        for i, player in enumerate(self.players):
            if mask >> i & 1:
                cols.extend(player.columns)
        return np.array(sorted(cols), dtype=int)

    def design_for(self, mask):
        """Design submatrix of the players in ``mask`` (original column order)."""
        return self.design[:, self.columns_for(mask)]

    def mask_of(self, names):
        """Bitmask of the players with the given names."""
        index = {p.name: i for i, p in enumerate(self.players)}
        mask = 0
        for name in names:
            if name not in index:
                raise ConfigError(f"unknown player '{name}'")
            mask |= 1 << index[name]
        return mask

    def restrict(self, names):
        """New Dataset keeping only the named players (in the given order)."""
        index = {p.name: p for p in self.players}
        kept = []
        for name in names:
            if name not in index:
                raise ConfigError(f"unknown player '{name}'")
            kept.append(index[name])
        cols = [c for p in kept for c in p.columns]
        remap = {old: new for new, old in enumerate(cols)}
        players = tuple(
            Player(p.name, tuple(remap[c] for c in p.columns)) for p in kept
        )
        return Dataset(
            y=self.y,
            design=self.design[:, cols],
            players=players,
            column_names=tuple(self.column_names[c] for c in cols),
            response_name=self.response_name,
        )

    def with_response(self, y, response_name, rows=None):
        """New Dataset with a replaced response, optionally on a row subset."""
        if rows is None:
            return replace(self, y=np.asarray(y, dtype=float), response_name=response_name)
        return Dataset(
            y=np.asarray(y, dtype=float)[rows],
            design=self.design[rows],
            players=self.players,
            column_names=self.column_names,
            response_name=response_name,
        )

    @classmethod
    def from_arrays(cls, y, design, players=None, column_names=None, response_name="y"):
        """Build a Dataset from plain arrays; defaults to one player per column."""
        design = np.asarray(design, dtype=float)
        m = design.shape[1]
        if column_names is None:
            column_names = tuple(f"x{i + 1}" for i in range(m))
        if players is None:
            players = tuple(Player(column_names[i], (i,)) for i in range(m))
        else:
            players = tuple(
                p if isinstance(p, Player) else Player(p[0], tuple(p[1]))
                for p in players
            )
        return cls(
            y=y,
            design=design,
            players=players,
            column_names=tuple(column_names),
            response_name=response_name,
        )


def select_columns(ds, mask):
    """Columns of exactly the players in ``mask`` plus their names.

    The empty mask returns a zero-column matrix; the intercept is implicit
    in every model and is never part of the returned columns.
    """
    cols = ds.columns_for(mask)
    return ds.design[:, cols], tuple(ds.column_names[c] for c in cols)


def _normalize_player_specs(player_specs):
    specs = []
    if isinstance(player_specs, dict):
        items = player_specs.items()
        for name, cols in items:
            specs.append((str(name), [str(c) for c in cols]))
        return specs
    for spec in player_specs:
        if isinstance(spec, str):
            specs.append((spec, [spec]))
        elif isinstance(spec, (tuple, list)) and len(spec) == 2:
            name, cols = spec
            cols = [cols] if isinstance(cols, str) else [str(c) for c in cols]
            specs.append((str(name), cols))
        else:
            raise ConfigError(f"cannot parse player spec {spec!r}")
    return specs


def _is_categorical(series):
    if isinstance(series.dtype, pd.CategoricalDtype):
        return True
    return series.dtype == object or series.dtype == bool or pd.api.types.is_string_dtype(series)


def encode_dataset(table, response_name, player_specs, factor_policy="first-reference"):
    """Encode a typed table into a Dataset.

    Numeric columns pass through unchanged.  Categorical, boolean and
    string columns expand into (levels - 1) dummy columns under their
    player; the reference level is the first level in lexicographic
    order.  Rows with missing values in any used column are rejected.

    Parameters
    ----------
    table : pandas.DataFrame or dict of columns
    response_name : str
    player_specs : list
        Items are either a column name (one single-column player) or a
        ``(player_name, [column, ...])`` pair.  A mapping of player name
        to column list is also accepted.
    factor_policy : str
        Only "first-reference" is implemented.
    """
    if factor_policy != "first-reference":
        raise ConfigError(f"unknown factor policy '{factor_policy}'")
    if not isinstance(table, pd.DataFrame):
        table = pd.DataFrame(table)
    specs = _normalize_player_specs(player_specs)
    if not specs:
        raise ConfigError("at least one player is required")

    if response_name not in table.columns:
        raise ColumnError(f"response column '{response_name}' not found")
    used_cols = [response_name]
    for name, cols in specs:
        for col in cols:
            if col not in table.columns:
                raise ColumnError(f"column '{col}' (player '{name}') not found")
            if col == response_name:
                raise ConfigError(f"response column '{col}' cannot also be a regressor")
            used_cols.append(col)
    if len(set(used_cols)) != len(used_cols):
        dupes = sorted({c for c in used_cols if used_cols.count(c) > 1})
        raise ConfigError(f"columns assigned more than once: {', '.join(dupes)}")

    missing = table[used_cols].isna().any(axis=1)
    if missing.any():
        rows = list(np.flatnonzero(missing.to_numpy()))
        shown = ", ".join(str(r) for r in rows[:10])
        more = "" if len(rows) <= 10 else f" (+{len(rows) - 10} more)"
        raise MissingValueError(
            f"missing values in used columns at rows: {shown}{more}", rows=rows
        )

    response = table[response_name]
    if _is_categorical(response) or not pd.api.types.is_numeric_dtype(response):
        raise ResponseTypeError(f"response column '{response_name}' is not numeric")
    y = response.to_numpy(dtype=float)

    design_cols = []
    column_names = []
    players = []
    for name, cols in specs:
        owned = []
        for col in cols:
            series = table[col]
            if _is_categorical(series):
                levels = sorted(pd.unique(series.astype(str)))
                if len(levels) < 2:
                    raise DegenerateColumnError(
                        f"column '{col}' has fewer than 2 observed levels"
                    )
                as_str = series.astype(str).to_numpy()
                for level in levels[1:]:
                    owned.append(len(design_cols))
                    design_cols.append((as_str == level).astype(float))
                    column_names.append(f"{col}[{level}]")
            else:
                values = series.to_numpy(dtype=float)
                if np.ptp(values) == 0.0:
                    raise DegenerateColumnError(f"column '{col}' is constant")
                owned.append(len(design_cols))
                design_cols.append(values)
                column_names.append(col)
        players.append(Player(name, tuple(owned)))

    design = np.column_stack(design_cols)
    return Dataset(
        y=y,
        design=design,
        players=tuple(players),
        column_names=tuple(column_names),
        response_name=response_name,
    )


def read_table(path, delimiter=","):
    """Read a delimited text file with a header row into a DataFrame."""
    return pd.read_csv(path, sep=delimiter)
