# Sentinel for "unreachable" in integer cost tables; sums of a few of these
# still fit comfortably in int64.
INF = 1 << 50
