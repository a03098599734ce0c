"""
Democratic journal engine.

Reader-majority labels train a Naive Bayes classifier that decides which
submissions to publish; reviewers are ranked by the precision of their
accept recommendations.
"""
