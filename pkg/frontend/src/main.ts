/** DOM wiring for the capture wizard. */

import { HttpSessionApi, Subject, Survey } from './api.js';
import { CaptureWizard, SESSIONS_PER_PHRASE, Screen } from './wizard.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const wizard = new CaptureWizard(new HttpSessionApi(), {
  onWarning: showWarning,
  onScreenChange: render,
});

function showWarning(message: string): void {
  const box = el<HTMLDivElement>('warning');
  box.textContent = message;
  box.hidden = false;
  window.setTimeout(() => (box.hidden = true), 4000);
}

function render(screen: Screen): void {
  for (const s of ['metadata', 'survey', 'typing', 'done']) {
    el(`screen-${s}`).hidden = s !== screen;
  }
  if (screen === 'typing') {
    el('phrase-text').textContent = wizard.phrase.text;
    el('session-counter').textContent =
      `session ${wizard.sessionCount + 1} of ${SESSIONS_PER_PHRASE}`;
    const mirror = el<HTMLInputElement>('mirror');
    mirror.value = '';
    mirror.focus();
  }
}

function readMetadata(): Subject {
  const year = Number(el<HTMLInputElement>('birth-year').value);
  return {
    subject_id: Number(el<HTMLInputElement>('subject-id').value),
    gender: el<HTMLSelectElement>('gender').value as Subject['gender'],
    age_group: el<HTMLSelectElement>('age-group').value as Subject['age_group'],
    birth_year: year,
  };
}

function readSurvey(): Survey {
  return {
    handedness: el<HTMLSelectElement>('handedness').value as Survey['handedness'],
    owns_computer: el<HTMLInputElement>('owns-computer').checked,
  };
}

el<HTMLFormElement>('metadata-form').addEventListener('submit', (e) => {
  e.preventDefault();
  wizard.submitMetadata(readMetadata());
});

el<HTMLFormElement>('survey-form').addEventListener('submit', (e) => {
  e.preventDefault();
  wizard.submitSurvey(readSurvey());
});

const mirror = el<HTMLInputElement>('mirror');

function forward(e: KeyboardEvent): void {
  const shouldSubmit = wizard.handleKey({
    key: e.key,
    type: e.type as 'keydown' | 'keyup',
    repeat: e.repeat,
    timeStamp: e.timeStamp,
  });
  mirror.value = wizard.typedMirror;
  if (shouldSubmit) {
    void wizard.submit().then(() => {
      mirror.value = wizard.typedMirror;
      render(wizard.screen);
    });
  }
  e.preventDefault();
}

mirror.addEventListener('keydown', forward);
mirror.addEventListener('keyup', forward);
mirror.addEventListener('paste', (e) => e.preventDefault());
mirror.addEventListener('blur', () => {
  if (wizard.screen === 'typing' && wizard.bufferedEvents.length > 0) {
    showWarning('Capture paused: the typing box lost focus. Restarting.');
    wizard.restart();
    mirror.value = '';
  }
});

el<HTMLButtonElement>('restart').addEventListener('click', () => {
  wizard.restart();
  mirror.value = '';
  mirror.focus();
});

el<HTMLButtonElement>('retry').addEventListener('click', () => {
  void wizard.retry().then(() => render(wizard.screen));
});

render(wizard.screen);
