"""Integration tests for the activity recognition chain.

These run the chain end to end on synthetic recordings:

- learning checks for training and leave-one-subject-out validation
- command runs with artifact and manifest-replay checks

All tests in this module are marked with @pytest.mark.integration
to distinguish them from unit tests.
"""
