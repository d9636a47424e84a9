"""Waltz choreography and the simulated follower."""
