import itertools


def naive_runs(x):
    return [(b, len(list(g))) for b, g in itertools.groupby(x)]


def strings(n):
    return ("".join(t) for t in itertools.product("01", repeat=n))
