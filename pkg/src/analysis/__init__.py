"""Study metrics from questionnaires and trial logs."""
