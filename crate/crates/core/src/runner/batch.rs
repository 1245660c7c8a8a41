use crate::error::{Error, Result};

/// First-fit packing of circuit groups into batches of at most
/// `max_per_batch` circuits. Groups are never split. Returns group indices
/// per batch.
pub fn plan_batches(group_sizes: &[usize], max_per_batch: usize) -> Result<Vec<Vec<usize>>> {
    let mut batches: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, &size) in group_sizes.iter().enumerate() {
        if size > max_per_batch {
            return Err(Error::GroupTooLarge {
                size,
                limit: max_per_batch,
            });
        }
        match batches
            .iter_mut()
            .find(|(used, _)| used + size <= max_per_batch)
        {
            Some((used, members)) => {
                *used += size;
                members.push(i);
            }
            None => batches.push((size, vec![i])),
        }
    }
    Ok(batches.into_iter().map(|(_, m)| m).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loads(sizes: &[usize], max: usize) -> Vec<usize> {
        plan_batches(sizes, max)
            .unwrap()
            .iter()
            .map(|b| b.iter().map(|&i| sizes[i]).sum())
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(loads(&[5, 5, 5], 12), [10, 5]);
        assert!(matches!(
            plan_batches(&[5], 4),
            Err(Error::GroupTooLarge { size: 5, limit: 4 })
        ));
        assert_eq!(plan_batches(&[3], 3).unwrap(), [vec![0]]);
        assert!(plan_batches(&[], 3).unwrap().is_empty());
    }

    #[test]
    fn first_fit_reuses_earlier_batches() {
        assert_eq!(
            plan_batches(&[6, 5, 4, 2], 8).unwrap(),
            [vec![0, 3], vec![1], vec![2]]
        );
    }
}
