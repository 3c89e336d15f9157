from pathlib import Path

import pytest

from core import Document
from core.errors import ConfigurationError, IngestionError
from dataset import ingest_dataset, sample_documents


class TestJsonLines:
    def test_missing_ids_are_line_positions(self, write_jsonl):
        path = write_jsonl([{"text": "good film", "label": "pos"}, {"id": "x", "text": "bad plot"}])
        documents = ingest_dataset(path)
        assert documents[0] == Document("000000", "good film", "pos")
        assert documents[0].words == ("good", "film")
        assert documents[1].id == "x"
        assert documents[1].gold_label is None

    def test_empty_documents_are_dropped(self, write_jsonl):
        path = write_jsonl([{"text": "good"}, {"text": "   "}, {"text": ""}])
        assert [d.id for d in ingest_dataset(path)] == ["000000"]

    def test_unparseable_line_names_its_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"text": "fine"}\n{"text": oops}\n', encoding="utf-8")
        with pytest.raises(IngestionError) as info:
            ingest_dataset(path)
        assert info.value.line_number == 2

    def test_missing_text_field(self, write_jsonl):
        with pytest.raises(IngestionError, match="line 1"):
            ingest_dataset(write_jsonl([{"body": "good"}]))

    def test_duplicate_ids(self, write_jsonl):
        with pytest.raises(IngestionError, match="duplicate"):
            ingest_dataset(write_jsonl([{"id": "a", "text": "one"}, {"id": "a", "text": "two"}]))

    def test_missing_file(self, tmp_path):
        with pytest.raises(IngestionError):
            ingest_dataset(tmp_path / "absent.jsonl")

    def test_unknown_format(self, write_jsonl):
        with pytest.raises(ConfigurationError):
            ingest_dataset(write_jsonl([{"text": "a"}]), format="parquet")


class TestCsv:
    def test_header_names_pick_the_columns(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text('label,text\npos,"good, solid film"\nneg,dull plot\n', encoding="utf-8")
        documents = ingest_dataset(path, format="csv")
        assert [d.text for d in documents] == ["good, solid film", "dull plot"]
        assert [d.id for d in documents] == ["000000", "000001"]
        assert documents[1].gold_label == "neg"

    def test_positional_columns_and_custom_delimiter(self, tmp_path):
        path = tmp_path / "data.tsv"
        path.write_text("review\tsentiment\ngreat acting\tpos\n\tneg\n", encoding="utf-8")
        documents = ingest_dataset(path, format="csv", delimiter="\t")
        assert [(d.text, d.gold_label) for d in documents] == [("great acting", "pos")]

    def test_wrong_column_count(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("a,b,c\n1,2,3\n", encoding="utf-8")
        with pytest.raises(IngestionError, match="2 columns"):
            ingest_dataset(path, format="csv")

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(IngestionError):
            ingest_dataset(path, format="csv")


class TestSampling:
    @pytest.fixture
    def documents(self):
        return [Document(f"d{i:04d}", f"text number {i}") for i in range(1000)]

    def test_exact_size_and_unique_ids(self, documents):
        sample = sample_documents(documents, 200, 13)
        assert len({d.id for d in sample}) == 200

    def test_same_seed_same_ids(self, documents):
        assert sample_documents(documents, 50, 4) == sample_documents(documents, 50, 4)
        assert sample_documents(documents, 50, 4) != sample_documents(documents, 50, 5)

    def test_input_order_does_not_matter(self, documents):
        assert sample_documents(documents[::-1], 50, 4) == sample_documents(documents, 50, 4)

    def test_exhaustive_sample_is_the_input_set(self, documents):
        assert sample_documents(documents, 1000, 0) == sorted(documents, key=lambda d: d.id)

    @pytest.mark.parametrize("size", [1001, 0])
    def test_invalid_sizes(self, documents, size):
        with pytest.raises(ConfigurationError):
            sample_documents(documents, size, 0)


def test_bundled_sample_dataset():
    documents = ingest_dataset(Path(__file__).parent.parent / "data" / "sample.jsonl")
    assert len(documents) == 24
    assert documents[0].id == "r001"
