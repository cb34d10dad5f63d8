"""Associative arrays in five minutes: build, add, transpose, multiply, reduce."""
from dimprofile import AssociativeArray, dumps

# Two tweets, each exploded into presence columns.
tweets = AssociativeArray.from_triples([
    ("tweet1", "user|alice", 1), ("tweet1", "word|hello", 1), ("tweet1", "word|world", 1),
    ("tweet2", "user|bob", 1), ("tweet2", "word|hello", 1),
])
print(tweets)               # 2x4, nnz=5
print(dumps(tweets))        # row<TAB>col<TAB>value, sorted

# Adding arrays with no shared column key just places them side by side.
times = AssociativeArray.from_triples([("tweet1", "time|09:00", 1), ("tweet2", "time|09:05", 1)])
both = tweets + times
print(both.nnz == tweets.nnz + times.nnz)   # True

# Pull out one entity by column prefix, like E(:, StartsWith('word|,')).
words = both.select_col_prefix("word|")
print(dumps(words.col_sums()))              # 1  word|hello  2 ...

# Correlate users with words: which user said which word, and how often.
users = both.select_col_prefix("user|")
print(dumps(users.T @ words))

# Keep only the words used more than once.
print(dumps(words.col_sums() > 1))
