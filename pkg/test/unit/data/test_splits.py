"""
Unit tests for splitting datasets.
"""

from test.mock_data import SMALL_SYNTHETIC_SPEC, make_sample, make_separable_dataset

import pytest

from pump_monitor.core.exceptions import UsageError
from pump_monitor.data.splits import split_adaptation, split_fixed, split_leave_one_pump_out
from pump_monitor.data.synthetic import generate_synthetic
from pump_monitor.models.sample import PumpDataset


class TestSplitLeaveOnePumpOut:
    """Tests for the `split_leave_one_pump_out` function."""

    def test_split(self):
        """Test the held-out pump is only in the test view and every other pump only in the training view."""

        dataset = make_separable_dataset(3)

        train_view, test_view = split_leave_one_pump_out(dataset, "pump-1")

        assert train_view.pump_ids == ["pump-0", "pump-2"]
        assert test_view.pump_ids == ["pump-1"]
        assert len(train_view) + len(test_view) == len(dataset)

    def test_with_unknown_pump(self):
        """Test holding out a pump that does not exist."""

        with pytest.raises(UsageError):
            split_leave_one_pump_out(make_separable_dataset(2), "pump-9")


class TestSplitFixed:
    """Tests for the `split_fixed` function."""

    def test_split_is_stratified_and_disjoint(self):
        """Test every pump contributes a rounded share of each label to the test view."""

        dataset = generate_synthetic(SMALL_SYNTHETIC_SPEC)

        train_view, test_view = split_fixed(dataset, 0.25, seed=1)

        for pump_id, samples in dataset.pumps.items():
            test_labels = [sample.label for sample in test_view.pumps[pump_id]]
            assert test_labels.count(0) == 1
            assert test_labels.count(1) == 2
            assert len(train_view.pumps[pump_id]) == len(samples) - 3
            for sample in test_view.pumps[pump_id]:
                assert all(sample is not other for other in train_view.pumps[pump_id])

    def test_same_seed_is_deterministic(self):
        """Test splitting twice with the same seed gives identical views."""

        dataset = generate_synthetic(SMALL_SYNTHETIC_SPEC)

        first = split_fixed(dataset, 0.2, seed=5)
        second = split_fixed(dataset, 0.2, seed=5)

        assert first[0].samples() == second[0].samples()
        assert first[1].samples() == second[1].samples()

    def test_single_sample_class_goes_to_training(self):
        """Test a label with a single sample is never placed in the test view."""

        dataset = PumpDataset(
            pumps={"pump-a": [make_sample(label=0, x=1.0), make_sample(label=0, x=2.0), make_sample(label=1)]}
        )

        train_view, test_view = split_fixed(dataset, 0.5, seed=0)

        assert [sample.label for sample in test_view.pumps["pump-a"]] == [0]
        assert [sample.label for sample in train_view.pumps["pump-a"]] == [0, 1]

    @pytest.mark.parametrize("test_ratio", [0.0, 1.0, -0.5])
    def test_with_invalid_ratio(self, test_ratio):
        """Test splitting with a test ratio outside (0, 1)."""

        with pytest.raises(UsageError):
            split_fixed(make_separable_dataset(1), test_ratio, seed=0)


class TestSplitAdaptation:
    """Tests for the `split_adaptation` function."""

    def test_first_normals_are_used_for_adaptation(self):
        """Test the first half of the normal samples in stored order forms the adaptation set."""

        samples = [
            make_sample(label=0, x=1.0),
            make_sample(label=1, x=2.0),
            make_sample(label=0, x=3.0),
            make_sample(label=0, x=4.0),
            make_sample(label=1, x=5.0),
        ]

        adapt_normals, eval_set = split_adaptation(samples)

        assert [sample.x[0] for sample in adapt_normals] == [1.0, 3.0]
        assert [sample.x[0] for sample in eval_set] == [2.0, 4.0, 5.0]

    def test_full_fraction(self):
        """Test adapting on every normal sample leaves only abnormal samples for evaluation."""

        samples = [make_sample(label=0), make_sample(label=0), make_sample(label=1)]

        adapt_normals, eval_set = split_adaptation(samples, 1.0)

        assert len(adapt_normals) == 2
        assert [sample.label for sample in eval_set] == [1]

    def test_with_single_normal(self):
        """Test splitting a pump with only one normal sample."""

        with pytest.raises(UsageError):
            split_adaptation([make_sample(label=0), make_sample(label=1)])

    @pytest.mark.parametrize("adapt_fraction", [0.0, 1.5])
    def test_with_invalid_fraction(self, adapt_fraction):
        """Test splitting with an adaptation fraction outside (0, 1]."""

        with pytest.raises(UsageError):
            split_adaptation([make_sample(label=0), make_sample(label=0)], adapt_fraction)
