from pipeline.events import EventRecorder


def test_recorder_sorts_by_time():
    recorder = EventRecorder()
    recorder.add(1.0, "step_onset", step=2)
    recorder.add(0.7, "utterance", text="Two")
    recorder.add(1.0, "step_complete", step=1)
    events = recorder.snapshot()
    assert [e.kind for e in events] == ["utterance", "step_onset", "step_complete"]
    assert events[0].payload["text"] == "Two"
    assert events[1].to_dict() == {"time": 1.0, "kind": "step_onset", "payload": {"step": 2}}
