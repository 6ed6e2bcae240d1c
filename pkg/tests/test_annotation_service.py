import pytest
from fastapi.testclient import TestClient

from trihate.annotation.service import create_app
from trihate.annotation.store import AnnotationStore
from trihate.corpus import Corpus, Label, Language, Tweet


@pytest.fixture
def corpus():
    return Corpus(
        tweets=[
            Tweet("t1", "first tweet", Language.ENGLISH, Label.HATEFUL),
            Tweet("t2", "دوسرا ٹویٹ یہاں", Language.URDU, Label.NOT_HATEFUL),
            Tweet("t3", "tercer tuit", Language.SPANISH, Label.HATEFUL),
        ]
    )


@pytest.fixture
def client(corpus, tmp_path):
    store = AnnotationStore(tmp_path / "store.jsonl")
    app = create_app(corpus, store, annotators_per_item=2)
    return TestClient(app)


def label_all(client, annotator, label="Hateful"):
    while True:
        task = client.get(f"/api/tasks/next?annotator={annotator}").json()
        if task["done"]:
            return task
        client.post(
            "/api/labels",
            json={"tweet_id": task["id"], "annotator_id": annotator, "label": label},
        )


def test_next_task_serves_unlabeled_in_order(client):
    task = client.get("/api/tasks/next?annotator=a1").json()
    assert task["id"] == "t1"
    assert task["language"] == "English"
    assert "Hateful" in task["guidelines"] and "Not-Hateful" in task["guidelines"]
    # no gold label leaks
    assert "label" not in task

    client.post("/api/labels", json={"tweet_id": "t1", "annotator_id": "a1", "label": "Hateful"})
    assert client.get("/api/tasks/next?annotator=a1").json()["id"] == "t2"
    # other annotators still start from the beginning
    assert client.get("/api/tasks/next?annotator=a2").json()["id"] == "t1"


def test_done_after_queue_exhausted(client):
    final = label_all(client, "a1")
    assert final == {"done": True, "labeled": 3, "total": 3}


def test_submit_validation(client):
    response = client.post("/api/labels", json={"tweet_id": "nope", "annotator_id": "a1", "label": "Hateful"})
    assert response.status_code == 404
    response = client.post("/api/labels", json={"tweet_id": "t1", "annotator_id": "a1", "label": "maybe"})
    assert response.status_code == 400


def test_agreement_pending_then_computed(client):
    assert client.get("/api/agreement").json()["kappa"] is None
    label_all(client, "a1", "Hateful")
    label_all(client, "a2", "Hateful")
    payload = client.get("/api/agreement").json()
    # single-category unanimity is the defined perfect-agreement case
    assert payload["kappa"] == 1.0


def test_agreement_updates_with_disagreement(client):
    label_all(client, "a1", "Hateful")
    # a2 disagrees on everything
    label_all(client, "a2", "Not-Hateful")
    payload = client.get("/api/agreement").json()
    assert payload["item_count"] == 3
    assert payload["kappa"] == pytest.approx(-1.0, abs=1e-9)
    assert payload["interpretation"] == "Poor Agreement"
    assert payload["ties"] == 3


def test_agreement_perfect(client):
    for annotator in ("a1", "a2"):
        client.post("/api/labels", json={"tweet_id": "t1", "annotator_id": annotator, "label": "Hateful"})
        client.post("/api/labels", json={"tweet_id": "t2", "annotator_id": annotator, "label": "Not-Hateful"})
    payload = client.get("/api/agreement").json()
    assert payload["kappa"] == 1.0
    assert payload["interpretation"] == "Perfect Agreement"


def test_progress_counts(client):
    client.post("/api/labels", json={"tweet_id": "t1", "annotator_id": "a1", "label": "Hateful"})
    client.post("/api/labels", json={"tweet_id": "t2", "annotator_id": "a1", "label": "Hateful"})
    client.post("/api/labels", json={"tweet_id": "t1", "annotator_id": "a2", "label": "Hateful"})
    payload = client.get("/api/progress").json()
    assert payload == {"total": 3, "per_annotator": {"a1": 2, "a2": 1}}


def test_resubmission_supersedes(client):
    client.post("/api/labels", json={"tweet_id": "t1", "annotator_id": "a1", "label": "Hateful"})
    client.post("/api/labels", json={"tweet_id": "t1", "annotator_id": "a1", "label": "Not-Hateful"})
    payload = client.get("/api/progress").json()
    assert payload["per_annotator"] == {"a1": 1}
