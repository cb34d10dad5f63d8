"""Classify published per-entity counts (tweets and scheduler logs) without any data."""
from dimprofile.dda import ClassifierConfig, EntityStats, report_from_stats
from dimprofile.report import render_stats_table

# (entity, N_i, V_i, M_i) in the order the tables print them
tweets = [
    ("latlon", 1624984, 1625197, 1506465), ("lat", 1624984, 1625192, 1504469),
    ("lon", 1625061, 1625725, 1504619), ("place", 1741337, 1741516, 1504619),
    ("retweetID", 636455, 636644, 627163), ("reuserID", 720624, 722148, 676616),
    ("time", 2020000, 2020000, 35176), ("userID", 2020000, 2020000, 1711141),
    ("user", 2020000, 2020000, 1711143), ("word", 1976746, 17180314, 7838862),
]
sge = [
    ("Account", 11446187, 11446187, 1), ("CPU Hours", 11446187, 11446187, 2752964),
    ("Default Department", 11446187, 11446187, 1), ("Job Name", 11446187, 11446187, 90491),
    ("Job Number", 11446187, 11446187, 485212), ("Memory Usage", 11446187, 11446187, 5241559),
    ("Priority", 11446187, 11446187, 1), ("Task Number", 11446187, 11446187, 7491889),
    ("User Name", 11446187, 11446187, 8388),
]

for rows in (tweets, sge):
    stats = [EntityStats(e, n, m, v) for e, n, v, m in rows]
    print(render_stats_table(report_from_stats(stats)))

# The thresholds are tunable. Job Number sits at N/M ~ 23.6, so a looser
# organizational cut relabels it.
loose = ClassifierConfig(tau_organization=20)
stats = [EntityStats(e, n, m, v) for e, n, v, m in sge]
print(render_stats_table(report_from_stats(stats, loose)))
